#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "prgan/arch.hpp"
#include "prgan/errors.hpp"
#include "prgan/models.hpp"
#include "prgan/nn.hpp"
#include "prgan/synth.hpp"

using namespace prgan;

namespace {

// Central-difference gradient check of a scalar loss through one layer:
// loss = sum(w_out * layer(x)) with fixed random w_out. Inputs can be given
// explicitly (maxpool needs well-separated values to avoid argmax ties).
void gradcheck_layer(nn::Layer& layer, int batch, Rng& rng, bool train_mode = false,
                     std::vector<double> x = {}) {
    int in_dim = layer.input_dim();
    int out_dim = layer.output_dim();
    if (x.empty()) {
        x.resize(static_cast<std::size_t>(batch) * in_dim);
        for (auto& v : x) {
            do {
                v = normal(rng);
            } while (std::abs(v) < 0.05);  // keep away from relu kinks
        }
    }
    std::vector<double> w(static_cast<std::size_t>(batch) * out_dim);
    for (auto& v : w) v = normal(rng);

    auto loss_at = [&](const std::vector<double>& input) {
        const auto& y = layer.forward(input, batch, train_mode);
        double acc = 0;
        for (std::size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
        return acc;
    };

    loss_at(x);
    const auto& gx = layer.backward(w, batch);
    std::vector<double> analytic(gx.begin(), gx.end());

    const double step = 1e-3;
    int checked = 0;
    for (std::size_t i = 0; i < x.size(); i += std::max<std::size_t>(1, x.size() / 24)) {
        auto xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        double fd = (loss_at(xp) - loss_at(xm)) / (2 * step);
        double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-8});
        CHECK(std::abs(fd - analytic[i]) / denom <= 1e-4);
        ++checked;
    }
    CHECK(checked > 0);
}

}  // namespace

TEST_CASE("gradient check: every layer kind against central differences") {
    Rng rng(12345);
    const int batch = 3;

    SUBCASE("dense") {
        nn::Dense layer(7, 5, rng);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("conv valid") {
        nn::Conv2D layer(2, 6, 6, 3, 3, 3, 0, rng);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("conv padded") {
        nn::Conv2D layer(1, 5, 5, 2, 3, 3, 1, rng);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("maxpool") {
        nn::MaxPool2x2 layer(2, 6, 6);
        // distinct, well-separated values so no argmax flips within the step
        std::vector<double> x(batch * layer.input_dim());
        std::vector<int> perm(x.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
        shuffle_vec(perm, rng);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.05 * perm[i];
        gradcheck_layer(layer, batch, rng, false, x);
    }
    SUBCASE("relu") {
        nn::ActivationLayer layer(nn::Activation::relu, 11);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("sigmoid") {
        nn::ActivationLayer layer(nn::Activation::sigmoid, 11);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("tanh") {
        nn::ActivationLayer layer(nn::Activation::tanh, 11);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("softmax") {
        nn::Softmax layer(6);
        gradcheck_layer(layer, batch, rng);
    }
    SUBCASE("dropout with frozen mask") {
        Rng drop_rng(99);
        nn::Dropout layer(0.5, 9, &drop_rng);
        layer.set_reuse_mask(true);
        std::vector<double> warmup(batch * 9, 1.0);
        layer.forward(warmup, batch, true);  // draw the mask once
        gradcheck_layer(layer, batch, rng, /*train_mode=*/true);
    }
}

TEST_CASE("gradient check: composite network end to end") {
    Rng rng(77);
    auto spec = models::make_mlp("gc_net", 6, {8, 8}, 3);
    auto net = models::build_network(spec, 5);

    const int batch = 4;
    std::vector<double> x(batch * 6);
    for (auto& v : x) {
        do {
            v = normal(rng);
        } while (std::abs(v) < 0.05);
    }
    std::vector<int> labels{0, 2, 1, 0};

    auto loss_at = [&](const std::vector<double>& input) {
        const auto& probs = net.forward(input, batch, false);
        return nn::cross_entropy(probs, labels, batch, 3, nullptr);
    };

    std::vector<double> gy;
    const auto& probs = net.forward(x, batch, false);
    nn::cross_entropy(probs, labels, batch, 3, &gy);
    auto gx = net.backward(gy, batch);

    const double step = 1e-3;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        double fd = (loss_at(xp) - loss_at(xm)) / (2 * step);
        double denom = std::max({std::abs(fd), std::abs(gx[i]), 1e-8});
        CHECK(std::abs(fd - gx[i]) / denom <= 1e-4);
    }
}

TEST_CASE("softmax probabilities form a simplex") {
    Rng rng(4);
    auto spec = models::build_classifier(models::ArchId::M3, models::ArchFamily::digits, 5);
    auto net = models::build_network(spec, 21);
    std::vector<double> x(3 * 144);
    for (auto& v : x) v = uniform01(rng);
    const auto& probs = net.forward(x, 3, false);
    for (int r = 0; r < 3; ++r) {
        double sum = 0;
        for (int c = 0; c < 5; ++c) {
            CHECK(probs[r * 5 + c] >= 0.0);
            sum += probs[r * 5 + c];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-6);
    }
}

TEST_CASE("checkpoints round-trip bit-exactly and predictions are deterministic") {
    auto data = core::two_blobs(200, 9);
    models::TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch = 32;
    cfg.seed = 123;
    auto spec = models::make_mlp("rt_net", 2, {8}, 2);
    auto model = models::train_classifier(
        spec, {data.features.data(), data.target_labels.data(), data.num_records, 2}, cfg);

    std::string path = (std::filesystem::temp_directory_path() / "prgan_rt.ckpt").string();
    models::save_checkpoint(model, path);
    auto loaded = models::load_checkpoint(path);

    CHECK(loaded.net.export_params() == model.net.export_params());
    CHECK(loaded.checkpoint_hash() == model.checkpoint_hash());
    CHECK(loaded.meta.seed == model.meta.seed);

    std::vector<double> x(data.features.begin(), data.features.begin() + 20 * 2);
    auto before = model.predict(x, 20);
    auto after = loaded.predict(x, 20);
    CHECK(before == after);
    // save -> load -> save produces identical bytes
    std::string path2 = path + ".again";
    models::save_checkpoint(loaded, path2);
    CHECK(hash_file(path) == hash_file(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("adam on linearly separable blobs reaches high held-out accuracy") {
    auto data = core::two_blobs(600, 31);
    auto heldout = core::two_blobs(200, 77);
    models::TrainConfig cfg;
    cfg.epochs = 30;
    cfg.batch = 64;
    cfg.seed = 5;
    cfg.heldout = {heldout.features.data(), heldout.target_labels.data(), heldout.num_records, 2};
    auto spec = models::make_mlp("blob_net", 2, {16}, 2);
    auto model = models::train_classifier(
        spec, {data.features.data(), data.target_labels.data(), data.num_records, 2}, cfg);
    double acc = models::accuracy(model, heldout.features, heldout.target_labels);
    CHECK(acc >= 0.99);

    SUBCASE("training loss is non-increasing over a trailing 5-epoch window") {
        const auto& losses = model.meta.epoch_losses;
        REQUIRE(losses.size() >= 10);
        auto window_mean = [&](int end) {
            double s = 0;
            for (int i = end - 5; i < end; ++i) s += losses[i];
            return s / 5;
        };
        for (int end = 6; end <= static_cast<int>(losses.size()); ++end)
            CHECK(window_mean(end) <= window_mean(end - 1) + 1e-9);
    }
}

TEST_CASE("single-class training yields a constant predictor with accuracy 1") {
    auto data = core::two_blobs(100, 13);
    std::vector<int> ones(data.num_records, 1);
    models::TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch = 32;
    auto spec = models::make_mlp("const_net", 2, {4}, 2);
    auto model = models::train_classifier(
        spec, {data.features.data(), ones.data(), data.num_records, 2}, cfg);
    CHECK(models::accuracy(model, data.features, ones) == doctest::Approx(1.0));
}

TEST_CASE("training rejects labels wider than the spec and empty eval sets") {
    auto data = core::two_blobs(50, 2);
    std::vector<int> bad(data.num_records, 3);
    models::TrainConfig cfg;
    auto spec = models::make_mlp("bad_net", 2, {4}, 2);
    CHECK_THROWS_AS(models::train_classifier(
                        spec, {data.features.data(), bad.data(), data.num_records, 2}, cfg),
                    OutOfRange);

    auto model = models::train_classifier(
        spec, {data.features.data(), data.target_labels.data(), data.num_records, 2},
        [] {
            models::TrainConfig c;
            c.epochs = 1;
            return c;
        }());
    CHECK_THROWS_AS(models::accuracy(model, {nullptr, nullptr, 0, 2}), EmptyEvaluationSet);
}
