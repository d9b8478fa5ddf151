#include <doctest.h>

#include <nlohmann/json.hpp>

#include "prgan/arch.hpp"
#include "prgan/errors.hpp"
#include "prgan/models.hpp"
#include "prgan/synth.hpp"

using namespace prgan;
using namespace prgan::models;

namespace {
std::vector<std::string> layer_kinds(const ArchitectureSpec& s) {
    static const char* names[] = {"dense", "conv", "maxpool", "relu",
                                  "sigmoid", "tanh", "softmax", "dropout"};
    std::vector<std::string> out;
    for (const auto& l : s.layers) out.push_back(names[static_cast<int>(l.kind)]);
    return out;
}
}  // namespace

TEST_CASE("classifier registry matches the architecture tables row for row") {
    SUBCASE("image M1: conv(64,5)+relu, conv(64,5)+relu, dropout .25, fc128+relu, dropout .5, fc2+softmax") {
        auto s = build_classifier(ArchId::M1, ArchFamily::mnist, 2);
        CHECK(layer_kinds(s) == std::vector<std::string>{"conv", "relu", "conv", "relu", "dropout",
                                                         "dense", "relu", "dropout", "dense",
                                                         "softmax"});
        CHECK(s.layers[0].units == 64);
        CHECK(s.layers[0].kh == 5);
        CHECK(s.layers[4].rate == 0.25);
        CHECK(s.layers[5].units == 128);
        CHECK(s.layers[7].rate == 0.5);
        CHECK(s.layers[8].units == 2);
    }
    SUBCASE("wifi M2: fc1024+relu, dropout .5, fc512+relu, dropout .5, fc(Y), softmax") {
        auto s = build_classifier(ArchId::M2, ArchFamily::wifi, 13);
        CHECK(layer_kinds(s) == std::vector<std::string>{"dense", "relu", "dropout", "dense",
                                                         "relu", "dropout", "dense", "softmax"});
        CHECK(s.layers[0].units == 1024);
        CHECK(s.layers[3].units == 512);
        CHECK(s.layers[6].units == 13);
    }
    SUBCASE("output width follows the class count") {
        auto s = build_classifier(ArchId::M1, ArchFamily::wifi, 104);
        CHECK(s.layers[s.layers.size() - 2].units == 104);
        auto net = build_network(s, 1);
        CHECK(net.output_dim() == 104);
    }
    SUBCASE("image M3 shape chain works (conv/pool stacking)") {
        auto s = build_classifier(ArchId::M3, ArchFamily::mnist, 2);
        auto net = build_network(s, 1);
        CHECK(net.input_dim() == 28 * 28);
        CHECK(net.output_dim() == 2);
    }
}

TEST_CASE("architecture specs serialize through JSON losslessly") {
    auto s = build_classifier(ArchId::M2, ArchFamily::mnist, 2);
    nlohmann::json j;
    to_json(j, s);
    ArchitectureSpec back;
    from_json(j, back);
    CHECK(back.name == s.name);
    CHECK(back.layers.size() == s.layers.size());
    for (std::size_t i = 0; i < s.layers.size(); ++i) {
        CHECK(back.layers[i].kind == s.layers[i].kind);
        CHECK(back.layers[i].units == s.layers[i].units);
        CHECK(back.layers[i].rate == s.layers[i].rate);
    }
}

TEST_CASE("count_cost: hand-computed values per layer kind") {
    SUBCASE("fc 128 -> 2: params 258, flops 2*128*2") {
        ArchitectureSpec s;
        s.name = "fc";
        s.input = {0, 0, 0, 128};
        s.layers = {{LayerKind::dense, 2, 0, 0, 0, 0.0}};
        auto c = count_cost(s);
        CHECK(c.params == 258);
        CHECK(c.flops == 512);
    }
    SUBCASE("conv(8,3,3) on 1x10x10 valid: params (9+1)*8, flops 2*9*8*64") {
        ArchitectureSpec s;
        s.name = "conv";
        s.input = {1, 10, 10, 0};
        s.layers = {{LayerKind::conv, 8, 3, 3, 0, 0.0}};
        auto c = count_cost(s);
        CHECK(c.params == 80);
        CHECK(c.flops == 2ull * 9 * 8 * 8 * 8);
    }
    SUBCASE("activations, dropout, pooling and softmax are free") {
        ArchitectureSpec s;
        s.name = "free";
        s.input = {1, 8, 8, 0};
        s.layers = {{LayerKind::relu, 0, 0, 0, 0, 0.0},
                    {LayerKind::maxpool, 0, 2, 2, 0, 0.0},
                    {LayerKind::dropout, 0, 0, 0, 0, 0.5},
                    {LayerKind::softmax, 0, 0, 0, 0, 0.0}};
        auto c = count_cost(s);
        CHECK(c.params == 0);
        CHECK(c.flops == 0);
    }
    SUBCASE("cost is additive over stacked specs") {
        ArchitectureSpec a;
        a.name = "a";
        a.input = {0, 0, 0, 30};
        a.layers = {{LayerKind::dense, 20, 0, 0, 0, 0.0}, {LayerKind::relu, 0, 0, 0, 0, 0.0}};
        ArchitectureSpec b;
        b.name = "b";
        b.input = {0, 0, 0, 20};
        b.layers = {{LayerKind::dense, 7, 0, 0, 0, 0.0}};
        ArchitectureSpec ab = a;
        ab.layers.insert(ab.layers.end(), b.layers.begin(), b.layers.end());
        auto ca = count_cost(a), cb = count_cost(b), cab = count_cost(ab);
        CHECK(cab.params == ca.params + cb.params);
        CHECK(cab.flops == ca.flops + cb.flops);
    }
    SUBCASE("conv on flat input is an unshaped layer") {
        ArchitectureSpec s;
        s.name = "bad";
        s.input = {0, 0, 0, 100};
        s.layers = {{LayerKind::conv, 8, 3, 3, 0, 0.0}};
        CHECK_THROWS_AS(count_cost(s), UnshapedLayer);
    }
}

TEST_CASE("registered generators stay compact") {
    // reference parameter counts: 235.4K (image generator), 1.1M (wifi)
    auto g_img = count_cost(build_generator(ArchFamily::mnist));
    CHECK(g_img.params <= 300000);
    CHECK(g_img.params <= 2 * 235400);
    CHECK(g_img.params >= 235400 / 2);  // same order as the reference
    auto g_wifi = count_cost(build_generator(ArchFamily::wifi));
    CHECK(g_wifi.params == 332808);  // 520-256-256-520 with biases
    CHECK(g_wifi.params <= 2 * 1100000);
    auto g_desk = count_cost(build_generator(ArchFamily::digits));
    CHECK(g_desk.params > 0);
}

TEST_CASE("unknown architectures are rejected") {
    CHECK_THROWS_AS(arch_id_from_string("M9"), UnknownArchitecture);
    CHECK_THROWS_AS(arch_family_from_string("faces"), UnknownArchitecture);
}

TEST_CASE("training a small conv net on images works end to end") {
    auto synth = core::synth_digits(240, 41);
    // tiny conv net on the 12x12 canvas, parity task
    ArchitectureSpec s;
    s.name = "tiny_conv";
    s.input = {1, 12, 12, 0};
    s.num_classes = 2;
    s.layers = {{LayerKind::conv, 8, 3, 3, 0, 0.0},
                {LayerKind::relu, 0, 0, 0, 0, 0.0},
                {LayerKind::maxpool, 0, 2, 2, 0, 0.0},
                {LayerKind::dense, 2, 0, 0, 0, 0.0},
                {LayerKind::softmax, 0, 0, 0, 0, 0.0}};
    TrainConfig cfg;
    cfg.epochs = 15;
    cfg.batch = 32;
    cfg.seed = 3;
    auto model = train_classifier(
        s, {synth.data.features.data(), synth.data.target_labels.data(), 240, 144}, cfg);
    double acc = accuracy(model, synth.data.features, synth.data.target_labels);
    CHECK(acc >= 0.9);
}
