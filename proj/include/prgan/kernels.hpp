#ifndef PRGAN_KERNELS_HPP
#define PRGAN_KERNELS_HPP

#include <cstddef>

// Dense compute kernels behind the nn layers. Every kernel exists twice:
// the OpenMP version used in production parallelizes over independent output
// elements only, so it is bit-identical to the serial reference (the per
// element reduction order never changes with the thread count).
namespace prgan::kernels {

namespace serial {

// C[m x n] = A[m x k] * B[k x n]
void matmul(const double* a, const double* b, double* c, int m, int k, int n);
// C[m x n] = A[k x m]^T * B[k x n]
void matmul_ta(const double* a, const double* b, double* c, int m, int k, int n);
// C[m x n] = A[m x k] * B[n x k]^T
void matmul_tb(const double* a, const double* b, double* c, int m, int k, int n);

// in:  [batch, c_in, h, w]; weights: [c_out, c_in, kh, kw]; out: [batch, c_out, ho, wo]
// pad is symmetric zero padding; stride fixed at 1.
void conv2d_forward(const double* in, const double* w, const double* bias, double* out,
                    int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad);
void conv2d_backward_input(const double* gout, const double* w, double* gin,
                           int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad);
void conv2d_backward_weights(const double* in, const double* gout, double* gw, double* gbias,
                             int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad);

// 2x2 max pool, stride 2. argmax stores the flat input offset chosen per output.
void maxpool2x2_forward(const double* in, double* out, int* argmax,
                        int batch, int c, int h, int w);
void maxpool2x2_backward(const double* gout, const int* argmax, double* gin,
                         int batch, int c, int h, int w);

void add_bias_rows(double* x, const double* bias, int rows, int cols);

void relu_forward(const double* x, double* y, std::size_t n);
void relu_backward(const double* x, const double* gy, double* gx, std::size_t n);
void sigmoid_forward(const double* x, double* y, std::size_t n);
void sigmoid_backward(const double* y, const double* gy, double* gx, std::size_t n);
void tanh_forward(const double* x, double* y, std::size_t n);
void tanh_backward(const double* y, const double* gy, double* gx, std::size_t n);

// Row-wise softmax with max subtraction.
void softmax_rows(const double* x, double* y, int rows, int cols);
// gx_i = y_i * (gy_i - sum_j gy_j y_j) per row.
void softmax_backward(const double* y, const double* gy, double* gx, int rows, int cols);

// Adam update, elementwise.
void adam_step(double* p, const double* g, double* m, double* v, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double bias_corr1, double bias_corr2);

}  // namespace serial

// OpenMP versions; same signatures, same results bit for bit.
void matmul(const double* a, const double* b, double* c, int m, int k, int n);
void matmul_ta(const double* a, const double* b, double* c, int m, int k, int n);
void matmul_tb(const double* a, const double* b, double* c, int m, int k, int n);
void conv2d_forward(const double* in, const double* w, const double* bias, double* out,
                    int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad);
void conv2d_backward_input(const double* gout, const double* w, double* gin,
                           int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad);
void conv2d_backward_weights(const double* in, const double* gout, double* gw, double* gbias,
                             int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad);
void maxpool2x2_forward(const double* in, double* out, int* argmax,
                        int batch, int c, int h, int w);
void maxpool2x2_backward(const double* gout, const int* argmax, double* gin,
                         int batch, int c, int h, int w);
void add_bias_rows(double* x, const double* bias, int rows, int cols);
void relu_forward(const double* x, double* y, std::size_t n);
void relu_backward(const double* x, const double* gy, double* gx, std::size_t n);
void sigmoid_forward(const double* x, double* y, std::size_t n);
void sigmoid_backward(const double* y, const double* gy, double* gx, std::size_t n);
void tanh_forward(const double* x, double* y, std::size_t n);
void tanh_backward(const double* y, const double* gy, double* gx, std::size_t n);
void softmax_rows(const double* x, double* y, int rows, int cols);
void softmax_backward(const double* y, const double* gy, double* gx, int rows, int cols);
void adam_step(double* p, const double* g, double* m, double* v, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double bias_corr1, double bias_corr2);

}  // namespace prgan::kernels

#endif
