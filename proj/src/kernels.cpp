#include "prgan/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace prgan::kernels {

namespace {

inline double conv_out_at(const double* in, const double* w, const double* bias,
                          int b, int o, int oy, int ox,
                          int c_in, int h, int wd, int kh, int kw, int pad) {
    double acc = bias ? bias[o] : 0.0;
    for (int ci = 0; ci < c_in; ++ci) {
        const double* in_c = in + (static_cast<std::size_t>(b) * c_in + ci) * h * wd;
        const double* w_c = w + ((static_cast<std::size_t>(o) * c_in + ci) * kh) * kw;
        for (int ky = 0; ky < kh; ++ky) {
            int iy = oy + ky - pad;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < kw; ++kx) {
                int ix = ox + kx - pad;
                if (ix < 0 || ix >= wd) continue;
                acc += in_c[iy * wd + ix] * w_c[ky * kw + kx];
            }
        }
    }
    return acc;
}

inline double conv_gin_at(const double* gout, const double* w,
                          int b, int ci, int iy, int ix,
                          int c_in, int c_out, int ho, int wo, int kh, int kw, int pad) {
    double acc = 0.0;
    for (int o = 0; o < c_out; ++o) {
        const double* g_c = gout + (static_cast<std::size_t>(b) * c_out + o) * ho * wo;
        const double* w_c = w + ((static_cast<std::size_t>(o) * c_in + ci) * kh) * kw;
        for (int ky = 0; ky < kh; ++ky) {
            int oy = iy - ky + pad;
            if (oy < 0 || oy >= ho) continue;
            for (int kx = 0; kx < kw; ++kx) {
                int ox = ix - kx + pad;
                if (ox < 0 || ox >= wo) continue;
                acc += g_c[oy * wo + ox] * w_c[ky * kw + kx];
            }
        }
    }
    return acc;
}

inline double conv_gw_at(const double* in, const double* gout,
                         int o, int ci, int ky, int kx,
                         int batch, int c_in, int h, int wd, int c_out,
                         int ho, int wo, int pad) {
    double acc = 0.0;
    for (int b = 0; b < batch; ++b) {
        const double* in_c = in + (static_cast<std::size_t>(b) * c_in + ci) * h * wd;
        const double* g_c = gout + (static_cast<std::size_t>(b) * c_out + o) * ho * wo;
        for (int oy = 0; oy < ho; ++oy) {
            int iy = oy + ky - pad;
            if (iy < 0 || iy >= h) continue;
            for (int ox = 0; ox < wo; ++ox) {
                int ix = ox + kx - pad;
                if (ix < 0 || ix >= wd) continue;
                acc += in_c[iy * wd + ix] * g_c[oy * wo + ox];
            }
        }
    }
    return acc;
}

inline double conv_gbias_at(const double* gout, int o, int batch, int c_out, int ho, int wo) {
    double acc = 0.0;
    for (int b = 0; b < batch; ++b) {
        const double* g_c = gout + (static_cast<std::size_t>(b) * c_out + o) * ho * wo;
        for (int i = 0; i < ho * wo; ++i) acc += g_c[i];
    }
    return acc;
}

inline void softmax_row(const double* x, double* y, int cols) {
    double mx = x[0];
    for (int j = 1; j < cols; ++j) mx = std::max(mx, x[j]);
    double sum = 0.0;
    for (int j = 0; j < cols; ++j) {
        y[j] = std::exp(x[j] - mx);
        sum += y[j];
    }
    double inv = 1.0 / sum;
    for (int j = 0; j < cols; ++j) y[j] *= inv;
}

inline void softmax_backward_row(const double* y, const double* gy, double* gx, int cols) {
    double dot = 0.0;
    for (int j = 0; j < cols; ++j) dot += gy[j] * y[j];
    for (int j = 0; j < cols; ++j) gx[j] = y[j] * (gy[j] - dot);
}

inline void adam_elem(double* p, const double* g, double* m, double* v, std::size_t i,
                      double lr, double beta1, double beta2, double eps,
                      double bias_corr1, double bias_corr2) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    double mhat = m[i] / bias_corr1;
    double vhat = v[i] / bias_corr2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
}

}  // namespace

// ---------------------------------------------------------------- serial

namespace serial {

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (int i = 0; i < m; ++i) {
        double* crow = c + static_cast<std::size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            double av = a[static_cast<std::size_t>(i) * k + kk];
            const double* brow = b + static_cast<std::size_t>(kk) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void matmul_ta(const double* a, const double* b, double* c, int m, int k, int n) {
    std::memset(c, 0, sizeof(double) * m * n);
    for (int i = 0; i < m; ++i) {
        double* crow = c + static_cast<std::size_t>(i) * n;
        for (int kk = 0; kk < k; ++kk) {
            double av = a[static_cast<std::size_t>(kk) * m + i];
            const double* brow = b + static_cast<std::size_t>(kk) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void matmul_tb(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<std::size_t>(i) * k;
        double* crow = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* brow = b + static_cast<std::size_t>(j) * k;
            double acc = 0.0;
            for (int kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
            crow[j] = acc;
        }
    }
}

void conv2d_forward(const double* in, const double* w, const double* bias, double* out,
                    int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad) {
    int ho = h + 2 * pad - kh + 1;
    int wo = wd + 2 * pad - kw + 1;
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < c_out; ++o)
            for (int oy = 0; oy < ho; ++oy)
                for (int ox = 0; ox < wo; ++ox)
                    out[((static_cast<std::size_t>(b) * c_out + o) * ho + oy) * wo + ox] =
                        conv_out_at(in, w, bias, b, o, oy, ox, c_in, h, wd, kh, kw, pad);
}

void conv2d_backward_input(const double* gout, const double* w, double* gin,
                           int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad) {
    int ho = h + 2 * pad - kh + 1;
    int wo = wd + 2 * pad - kw + 1;
    for (int b = 0; b < batch; ++b)
        for (int ci = 0; ci < c_in; ++ci)
            for (int iy = 0; iy < h; ++iy)
                for (int ix = 0; ix < wd; ++ix)
                    gin[((static_cast<std::size_t>(b) * c_in + ci) * h + iy) * wd + ix] =
                        conv_gin_at(gout, w, b, ci, iy, ix, c_in, c_out, ho, wo, kh, kw, pad);
}

void conv2d_backward_weights(const double* in, const double* gout, double* gw, double* gbias,
                             int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad) {
    int ho = h + 2 * pad - kh + 1;
    int wo = wd + 2 * pad - kw + 1;
    for (int o = 0; o < c_out; ++o) {
        for (int ci = 0; ci < c_in; ++ci)
            for (int ky = 0; ky < kh; ++ky)
                for (int kx = 0; kx < kw; ++kx)
                    gw[((static_cast<std::size_t>(o) * c_in + ci) * kh + ky) * kw + kx] =
                        conv_gw_at(in, gout, o, ci, ky, kx, batch, c_in, h, wd, c_out, ho, wo, pad);
        if (gbias) gbias[o] = conv_gbias_at(gout, o, batch, c_out, ho, wo);
    }
}

void maxpool2x2_forward(const double* in, double* out, int* argmax,
                        int batch, int c, int h, int w) {
    int ho = h / 2, wo = w / 2;
    for (int b = 0; b < batch; ++b)
        for (int ci = 0; ci < c; ++ci) {
            const double* in_c = in + (static_cast<std::size_t>(b) * c + ci) * h * w;
            std::size_t base = (static_cast<std::size_t>(b) * c + ci) * ho * wo;
            for (int oy = 0; oy < ho; ++oy)
                for (int ox = 0; ox < wo; ++ox) {
                    int iy = oy * 2, ix = ox * 2;
                    int best = iy * w + ix;
                    double bv = in_c[best];
                    int cand[3] = {iy * w + ix + 1, (iy + 1) * w + ix, (iy + 1) * w + ix + 1};
                    for (int t = 0; t < 3; ++t)
                        if (in_c[cand[t]] > bv) { bv = in_c[cand[t]]; best = cand[t]; }
                    out[base + oy * wo + ox] = bv;
                    argmax[base + oy * wo + ox] =
                        static_cast<int>((static_cast<std::size_t>(b) * c + ci) * h * w) + best;
                }
        }
}

void maxpool2x2_backward(const double* gout, const int* argmax, double* gin,
                         int batch, int c, int h, int w) {
    int ho = h / 2, wo = w / 2;
    std::memset(gin, 0, sizeof(double) * batch * c * h * w);
    std::size_t n = static_cast<std::size_t>(batch) * c * ho * wo;
    for (std::size_t i = 0; i < n; ++i) gin[argmax[i]] += gout[i];
}

void add_bias_rows(double* x, const double* bias, int rows, int cols) {
    for (int i = 0; i < rows; ++i) {
        double* row = x + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) row[j] += bias[j];
    }
}

void relu_forward(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0 ? x[i] : 0.0;
}

void relu_backward(const double* x, const double* gy, double* gx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) gx[i] = x[i] > 0 ? gy[i] : 0.0;
}

void sigmoid_forward(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

void sigmoid_backward(const double* y, const double* gy, double* gx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) gx[i] = gy[i] * y[i] * (1.0 - y[i]);
}

void tanh_forward(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
}

void tanh_backward(const double* y, const double* gy, double* gx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) gx[i] = gy[i] * (1.0 - y[i] * y[i]);
}

void softmax_rows(const double* x, double* y, int rows, int cols) {
    for (int i = 0; i < rows; ++i)
        softmax_row(x + static_cast<std::size_t>(i) * cols, y + static_cast<std::size_t>(i) * cols, cols);
}

void softmax_backward(const double* y, const double* gy, double* gx, int rows, int cols) {
    for (int i = 0; i < rows; ++i)
        softmax_backward_row(y + static_cast<std::size_t>(i) * cols,
                             gy + static_cast<std::size_t>(i) * cols,
                             gx + static_cast<std::size_t>(i) * cols, cols);
}

void adam_step(double* p, const double* g, double* m, double* v, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double bias_corr1, double bias_corr2) {
    for (std::size_t i = 0; i < n; ++i)
        adam_elem(p, g, m, v, i, lr, beta1, beta2, eps, bias_corr1, bias_corr2);
}

}  // namespace serial

// ---------------------------------------------------------------- OpenMP

void matmul(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        double* crow = c + static_cast<std::size_t>(i) * n;
        std::memset(crow, 0, sizeof(double) * n);
        for (int kk = 0; kk < k; ++kk) {
            double av = a[static_cast<std::size_t>(i) * k + kk];
            const double* brow = b + static_cast<std::size_t>(kk) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void matmul_ta(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        double* crow = c + static_cast<std::size_t>(i) * n;
        std::memset(crow, 0, sizeof(double) * n);
        for (int kk = 0; kk < k; ++kk) {
            double av = a[static_cast<std::size_t>(kk) * m + i];
            const double* brow = b + static_cast<std::size_t>(kk) * n;
            for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void matmul_tb(const double* a, const double* b, double* c, int m, int k, int n) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<std::size_t>(i) * k;
        double* crow = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* brow = b + static_cast<std::size_t>(j) * k;
            double acc = 0.0;
            for (int kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
            crow[j] = acc;
        }
    }
}

void conv2d_forward(const double* in, const double* w, const double* bias, double* out,
                    int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad) {
    int ho = h + 2 * pad - kh + 1;
    int wo = wd + 2 * pad - kw + 1;
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < c_out; ++o)
            for (int oy = 0; oy < ho; ++oy)
                for (int ox = 0; ox < wo; ++ox)
                    out[((static_cast<std::size_t>(b) * c_out + o) * ho + oy) * wo + ox] =
                        conv_out_at(in, w, bias, b, o, oy, ox, c_in, h, wd, kh, kw, pad);
}

void conv2d_backward_input(const double* gout, const double* w, double* gin,
                           int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad) {
    int ho = h + 2 * pad - kh + 1;
    int wo = wd + 2 * pad - kw + 1;
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < batch; ++b)
        for (int ci = 0; ci < c_in; ++ci)
            for (int iy = 0; iy < h; ++iy)
                for (int ix = 0; ix < wd; ++ix)
                    gin[((static_cast<std::size_t>(b) * c_in + ci) * h + iy) * wd + ix] =
                        conv_gin_at(gout, w, b, ci, iy, ix, c_in, c_out, ho, wo, kh, kw, pad);
}

void conv2d_backward_weights(const double* in, const double* gout, double* gw, double* gbias,
                             int batch, int c_in, int h, int wd, int c_out, int kh, int kw, int pad) {
    int ho = h + 2 * pad - kh + 1;
    int wo = wd + 2 * pad - kw + 1;
#pragma omp parallel for schedule(static)
    for (int o = 0; o < c_out; ++o) {
        for (int ci = 0; ci < c_in; ++ci)
            for (int ky = 0; ky < kh; ++ky)
                for (int kx = 0; kx < kw; ++kx)
                    gw[((static_cast<std::size_t>(o) * c_in + ci) * kh + ky) * kw + kx] =
                        conv_gw_at(in, gout, o, ci, ky, kx, batch, c_in, h, wd, c_out, ho, wo, pad);
        if (gbias) gbias[o] = conv_gbias_at(gout, o, batch, c_out, ho, wo);
    }
}

void maxpool2x2_forward(const double* in, double* out, int* argmax,
                        int batch, int c, int h, int w) {
    int ho = h / 2, wo = w / 2;
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < batch; ++b)
        for (int ci = 0; ci < c; ++ci) {
            const double* in_c = in + (static_cast<std::size_t>(b) * c + ci) * h * w;
            std::size_t base = (static_cast<std::size_t>(b) * c + ci) * ho * wo;
            for (int oy = 0; oy < ho; ++oy)
                for (int ox = 0; ox < wo; ++ox) {
                    int iy = oy * 2, ix = ox * 2;
                    int best = iy * w + ix;
                    double bv = in_c[best];
                    int cand[3] = {iy * w + ix + 1, (iy + 1) * w + ix, (iy + 1) * w + ix + 1};
                    for (int t = 0; t < 3; ++t)
                        if (in_c[cand[t]] > bv) { bv = in_c[cand[t]]; best = cand[t]; }
                    out[base + oy * wo + ox] = bv;
                    argmax[base + oy * wo + ox] =
                        static_cast<int>((static_cast<std::size_t>(b) * c + ci) * h * w) + best;
                }
        }
}

void maxpool2x2_backward(const double* gout, const int* argmax, double* gin,
                         int batch, int c, int h, int w) {
    // scatter with potential collisions only within one (b,c) plane; keep serial scatter
    serial::maxpool2x2_backward(gout, argmax, gin, batch, c, h, w);
}

void add_bias_rows(double* x, const double* bias, int rows, int cols) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) {
        double* row = x + static_cast<std::size_t>(i) * cols;
        for (int j = 0; j < cols; ++j) row[j] += bias[j];
    }
}

void relu_forward(const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) y[i] = x[i] > 0 ? x[i] : 0.0;
}

void relu_backward(const double* x, const double* gy, double* gx, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) gx[i] = x[i] > 0 ? gy[i] : 0.0;
}

void sigmoid_forward(const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

void sigmoid_backward(const double* y, const double* gy, double* gx, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) gx[i] = gy[i] * y[i] * (1.0 - y[i]);
}

void tanh_forward(const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) y[i] = std::tanh(x[i]);
}

void tanh_backward(const double* y, const double* gy, double* gx, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) gx[i] = gy[i] * (1.0 - y[i] * y[i]);
}

void softmax_rows(const double* x, double* y, int rows, int cols) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i)
        softmax_row(x + static_cast<std::size_t>(i) * cols, y + static_cast<std::size_t>(i) * cols, cols);
}

void softmax_backward(const double* y, const double* gy, double* gx, int rows, int cols) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i)
        softmax_backward_row(y + static_cast<std::size_t>(i) * cols,
                             gy + static_cast<std::size_t>(i) * cols,
                             gx + static_cast<std::size_t>(i) * cols, cols);
}

void adam_step(double* p, const double* g, double* m, double* v, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double bias_corr1, double bias_corr2) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        adam_elem(p, g, m, v, static_cast<std::size_t>(i), lr, beta1, beta2, eps, bias_corr1, bias_corr2);
}

}  // namespace prgan::kernels
