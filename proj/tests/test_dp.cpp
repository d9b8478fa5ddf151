#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "prgan/dp.hpp"
#include "prgan/errors.hpp"
#include "prgan/synth.hpp"

using namespace prgan;
using namespace prgan::baselines;

TEST_CASE("dp parameter labels are exact") {
    CHECK(DPParams::laplace(1.0).epsilon == doctest::Approx(1.0));
    CHECK(DPParams::laplace_from_epsilon(0.01).laplace_scale == doctest::Approx(100.0));
    CHECK(DPParams::laplace(2.0).epsilon == doctest::Approx(0.5));
    CHECK(DPParams::randomized_response(0.0).epsilon == doctest::Approx(0.0));
    CHECK(DPParams::randomized_response(0.5).epsilon ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    // inversion round-trip
    for (double p : {0.1, 0.5, 0.9}) {
        auto fwd = DPParams::randomized_response(p);
        auto back = DPParams::randomized_response_from_epsilon(fwd.epsilon);
        CHECK(back.rr_truth_prob == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("laplace noise statistics at one million draws") {
    Rng rng(1234);
    const int n = 1000000;
    const double b = 2.0;
    double abs_sum = 0.0;
    std::vector<double> sample(n);
    for (int i = 0; i < n; ++i) {
        sample[i] = laplace(rng, b);
        abs_sum += std::abs(sample[i]);
    }
    // mean absolute deviation of Laplace(b) is b, required within 1%
    CHECK(abs_sum / n == doctest::Approx(b).epsilon(0.01));
    // sign-symmetric: median within +-0.01 of 0
    std::nth_element(sample.begin(), sample.begin() + n / 2, sample.end());
    CHECK(std::abs(sample[n / 2]) <= 0.01);
}

TEST_CASE("laplace mechanism clips to [0,1], is deterministic, rejects binary data") {
    auto ds = core::two_blobs(300, 9);
    auto p1 = laplace_perturb(ds, 0.5, 42);
    auto p2 = laplace_perturb(ds, 0.5, 42);
    CHECK(p1.data.features == p2.data.features);
    for (double v : p1.data.features) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(p1.data.target_labels == ds.target_labels);

    auto binary = ds;
    binary.kind = core::DataKind::binary;
    for (auto& v : binary.features) v = v > 0.5 ? 1.0 : 0.0;
    CHECK_THROWS_AS(laplace_perturb(binary, 0.5, 1), WrongKind);
    CHECK_THROWS_AS(randomized_response(ds, 0.5, 1), WrongKind);
}

TEST_CASE("randomized response agreement and flip rates") {
    core::LabeledDataset ds;
    ds.kind = core::DataKind::binary;
    ds.num_records = 200;
    ds.dim = 500;  // 100k bits
    ds.num_target_classes = 1;
    ds.num_sensitive_classes = 1;
    Rng rng(5);
    for (int i = 0; i < ds.num_records; ++i) {
        for (int j = 0; j < ds.dim; ++j) ds.features.push_back(rng() % 2 ? 1.0 : 0.0);
        ds.target_labels.push_back(0);
        ds.sensitive_labels.push_back(0);
    }

    const double p = 0.5;
    auto out = randomized_response(ds, p, 77);
    int agree = 0;
    const int bits = ds.num_records * ds.dim;
    for (int i = 0; i < bits; ++i)
        if (out.data.features[i] == ds.features[i]) ++agree;
    double rate = static_cast<double>(agree) / bits;

    // expected agreement p + (1-p)/2 = 0.75, within 3 standard errors at 1e5 bits
    double agree_expect = p + (1 - p) / 2;
    double agree_se = std::sqrt(agree_expect * (1 - agree_expect) / bits);
    CHECK(std::abs(rate - agree_expect) <= 3 * agree_se);
    // flip probability (1-p)/2 within 3 standard errors
    double flip = 1.0 - rate;
    double expect = (1 - p) / 2;
    double se = std::sqrt(expect * (1 - expect) / bits);
    CHECK(std::abs(flip - expect) <= 3 * se);

    SUBCASE("p=0 gives uniform output bits") {
        auto uniform = randomized_response(ds, 0.0, 3);
        double ones = 0;
        for (double v : uniform.data.features) ones += v;
        CHECK(ones / bits == doctest::Approx(0.5).epsilon(0.02));
    }
}

TEST_CASE("epsilon grid is log-spaced over [0.01, 10] with at least 20 points") {
    auto grid = epsilon_grid();
    CHECK(grid.size() == 20);
    CHECK(grid.front() == doctest::Approx(0.01));
    CHECK(grid.back() == doctest::Approx(10.0));
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] > grid[i - 1]);
        // constant ratio
        CHECK(grid[i] / grid[i - 1] ==
              doctest::Approx(grid[1] / grid[0]).epsilon(1e-9));
    }
}
