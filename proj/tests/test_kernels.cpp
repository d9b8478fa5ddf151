#include <doctest.h>

#include <vector>

#include "prgan/kernels.hpp"
#include "prgan/util.hpp"

using namespace prgan;

namespace {
std::vector<double> random_vec(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal(rng) * 0.7;
    return v;
}
}  // namespace

TEST_CASE("matmul matches a hand example") {
    // [1 2; 3 4] * [5 6; 7 8] = [19 22; 43 50]
    std::vector<double> a{1, 2, 3, 4}, b{5, 6, 7, 8}, c(4);
    kernels::matmul(a.data(), b.data(), c.data(), 2, 2, 2);
    CHECK(c == std::vector<double>{19, 22, 43, 50});
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    Rng rng(42);
    const int m = 17, k = 23, n = 13;
    auto a = random_vec(m * k, rng);
    auto b = random_vec(k * n, rng);
    std::vector<double> c1(m * n), c2(m * n);

    kernels::matmul(a.data(), b.data(), c1.data(), m, k, n);
    kernels::serial::matmul(a.data(), b.data(), c2.data(), m, k, n);
    CHECK(c1 == c2);

    auto at = random_vec(k * m, rng);
    kernels::matmul_ta(at.data(), b.data(), c1.data(), m, k, n);
    kernels::serial::matmul_ta(at.data(), b.data(), c2.data(), m, k, n);
    CHECK(c1 == c2);

    auto bt = random_vec(n * k, rng);
    kernels::matmul_tb(a.data(), bt.data(), c1.data(), m, k, n);
    kernels::serial::matmul_tb(a.data(), bt.data(), c2.data(), m, k, n);
    CHECK(c1 == c2);
}

TEST_CASE("conv kernels: parallel == serial, forward matches a brute force oracle") {
    Rng rng(7);
    const int batch = 3, c_in = 2, h = 6, w = 5, c_out = 4, kh = 3, kw = 3;
    for (int pad : {0, 1}) {
        int ho = h + 2 * pad - kh + 1, wo = w + 2 * pad - kw + 1;
        auto in = random_vec(batch * c_in * h * w, rng);
        auto wt = random_vec(c_out * c_in * kh * kw, rng);
        auto bias = random_vec(c_out, rng);
        std::vector<double> out1(batch * c_out * ho * wo), out2(out1.size());

        kernels::conv2d_forward(in.data(), wt.data(), bias.data(), out1.data(), batch, c_in, h, w,
                                c_out, kh, kw, pad);
        kernels::serial::conv2d_forward(in.data(), wt.data(), bias.data(), out2.data(), batch,
                                        c_in, h, w, c_out, kh, kw, pad);
        CHECK(out1 == out2);

        // brute-force accumulation in a different loop order
        for (int b = 0; b < batch; ++b)
            for (int o = 0; o < c_out; ++o)
                for (int oy = 0; oy < ho; ++oy)
                    for (int ox = 0; ox < wo; ++ox) {
                        double acc = bias[o];
                        for (int ci = 0; ci < c_in; ++ci)
                            for (int ky = 0; ky < kh; ++ky)
                                for (int kx = 0; kx < kw; ++kx) {
                                    int iy = oy + ky - pad, ix = ox + kx - pad;
                                    if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                                    acc += in[((b * c_in + ci) * h + iy) * w + ix] *
                                           wt[((o * c_in + ci) * kh + ky) * kw + kx];
                                }
                        CHECK(out1[((b * c_out + o) * ho + oy) * wo + ox] ==
                              doctest::Approx(acc).epsilon(1e-12));
                    }

        auto gout = random_vec(out1.size(), rng);
        std::vector<double> gin1(in.size()), gin2(in.size());
        kernels::conv2d_backward_input(gout.data(), wt.data(), gin1.data(), batch, c_in, h, w,
                                       c_out, kh, kw, pad);
        kernels::serial::conv2d_backward_input(gout.data(), wt.data(), gin2.data(), batch, c_in,
                                               h, w, c_out, kh, kw, pad);
        CHECK(gin1 == gin2);

        std::vector<double> gw1(wt.size()), gw2(wt.size()), gb1(c_out), gb2(c_out);
        kernels::conv2d_backward_weights(in.data(), gout.data(), gw1.data(), gb1.data(), batch,
                                         c_in, h, w, c_out, kh, kw, pad);
        kernels::serial::conv2d_backward_weights(in.data(), gout.data(), gw2.data(), gb2.data(),
                                                 batch, c_in, h, w, c_out, kh, kw, pad);
        CHECK(gw1 == gw2);
        CHECK(gb1 == gb2);
    }
}

TEST_CASE("elementwise and softmax kernels: parallel == serial") {
    Rng rng(11);
    const int rows = 9, cols = 6;
    auto x = random_vec(rows * cols, rng);
    auto gy = random_vec(rows * cols, rng);
    std::vector<double> y1(x.size()), y2(x.size()), g1(x.size()), g2(x.size());

    kernels::relu_forward(x.data(), y1.data(), x.size());
    kernels::serial::relu_forward(x.data(), y2.data(), x.size());
    CHECK(y1 == y2);
    kernels::relu_backward(x.data(), gy.data(), g1.data(), x.size());
    kernels::serial::relu_backward(x.data(), gy.data(), g2.data(), x.size());
    CHECK(g1 == g2);

    kernels::sigmoid_forward(x.data(), y1.data(), x.size());
    kernels::serial::sigmoid_forward(x.data(), y2.data(), x.size());
    CHECK(y1 == y2);

    kernels::softmax_rows(x.data(), y1.data(), rows, cols);
    kernels::serial::softmax_rows(x.data(), y2.data(), rows, cols);
    CHECK(y1 == y2);
    for (int r = 0; r < rows; ++r) {
        double sum = 0;
        for (int c = 0; c < cols; ++c) sum += y1[r * cols + c];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    kernels::softmax_backward(y1.data(), gy.data(), g1.data(), rows, cols);
    kernels::serial::softmax_backward(y1.data(), gy.data(), g2.data(), rows, cols);
    CHECK(g1 == g2);
}

TEST_CASE("adam kernel: parallel == serial") {
    Rng rng(3);
    const std::size_t n = 101;
    auto g = random_vec(n, rng);
    auto p1 = random_vec(n, rng);
    auto p2 = p1;
    std::vector<double> m1(n, 0), v1(n, 0), m2(n, 0), v2(n, 0);
    kernels::adam_step(p1.data(), g.data(), m1.data(), v1.data(), n, 1e-3, 0.9, 0.999, 1e-8, 0.1,
                       0.001);
    kernels::serial::adam_step(p2.data(), g.data(), m2.data(), v2.data(), n, 1e-3, 0.9, 0.999,
                               1e-8, 0.1, 0.001);
    CHECK(p1 == p2);
    CHECK(m1 == m2);
    CHECK(v1 == v2);
}
