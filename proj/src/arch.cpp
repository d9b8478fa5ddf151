#include "prgan/arch.hpp"

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"

namespace prgan::models {

namespace {

LayerSpec dense(int units) { return {LayerKind::dense, units, 0, 0, 0, 0.0}; }
LayerSpec conv(int ch, int k, int pad = 0) { return {LayerKind::conv, ch, k, k, pad, 0.0}; }
LayerSpec relu() { return {LayerKind::relu, 0, 0, 0, 0, 0.0}; }
LayerSpec sigmoid() { return {LayerKind::sigmoid, 0, 0, 0, 0, 0.0}; }
LayerSpec softmax() { return {LayerKind::softmax, 0, 0, 0, 0, 0.0}; }
LayerSpec dropout(double rate) { return {LayerKind::dropout, 0, 0, 0, 0, rate}; }
LayerSpec maxpool() { return {LayerKind::maxpool, 0, 2, 2, 0, 0.0}; }

struct ShapeCursor {
    bool image;
    int c, h, w, flat;
    int dim() const { return image ? c * h * w : flat; }
};

ShapeCursor advance(const ShapeCursor& s, const LayerSpec& l, const std::string& where) {
    ShapeCursor n = s;
    switch (l.kind) {
        case LayerKind::dense:
            n.image = false;
            n.flat = l.units;
            return n;
        case LayerKind::conv: {
            if (!s.image) throw UnshapedLayer(where + ": conv needs an image-shaped input");
            n.c = l.units;
            n.h = s.h + 2 * l.pad - l.kh + 1;
            n.w = s.w + 2 * l.pad - l.kw + 1;
            if (n.h <= 0 || n.w <= 0) throw UnshapedLayer(where + ": conv kernel larger than input");
            return n;
        }
        case LayerKind::maxpool:
            if (!s.image) throw UnshapedLayer(where + ": maxpool needs an image-shaped input");
            n.h = s.h / 2;
            n.w = s.w / 2;
            return n;
        default:
            return n;  // activations, softmax, dropout keep the shape
    }
}

}  // namespace

const char* to_string(ArchId id) {
    switch (id) {
        case ArchId::M1: return "M1";
        case ArchId::M2: return "M2";
        default: return "M3";
    }
}

const char* to_string(ArchFamily f) {
    switch (f) {
        case ArchFamily::mnist: return "mnist";
        case ArchFamily::wifi: return "wifi";
        default: return "digits";
    }
}

ArchId arch_id_from_string(const std::string& s) {
    if (s == "M1" || s == "m1") return ArchId::M1;
    if (s == "M2" || s == "m2") return ArchId::M2;
    if (s == "M3" || s == "m3") return ArchId::M3;
    throw UnknownArchitecture("unknown arch id: " + s);
}

ArchFamily arch_family_from_string(const std::string& s) {
    if (s == "mnist") return ArchFamily::mnist;
    if (s == "wifi") return ArchFamily::wifi;
    if (s == "digits") return ArchFamily::digits;
    throw UnknownArchitecture("unknown arch family: " + s);
}

ArchitectureSpec build_classifier(ArchId id, ArchFamily family, int num_classes) {
    ArchitectureSpec spec;
    spec.num_classes = num_classes;
    spec.name = std::string(to_string(family)) + "_" + to_string(id);
    if (family == ArchFamily::mnist) {
        spec.input = {1, 28, 28, 0};
        switch (id) {
            case ArchId::M1:
                spec.layers = {conv(64, 5), relu(), conv(64, 5), relu(), dropout(0.25),
                               dense(128), relu(), dropout(0.5), dense(num_classes), softmax()};
                break;
            case ArchId::M2:
                spec.layers = {conv(64, 8), relu(), dropout(0.2), conv(128, 6), relu(),
                               conv(128, 5), relu(), dropout(0.5), dense(num_classes), softmax()};
                break;
            case ArchId::M3:
                spec.layers = {conv(32, 3), relu(), conv(32, 3), relu(), maxpool(),
                               conv(64, 3), relu(), conv(64, 3), relu(), maxpool(),
                               dense(200), relu(), dense(num_classes), softmax()};
                break;
        }
    } else if (family == ArchFamily::wifi) {
        spec.input = {0, 0, 0, 520};
        switch (id) {
            case ArchId::M1:
                spec.layers = {dense(256), relu(), dropout(0.5), dense(128), relu(), dropout(0.5),
                               dense(64), relu(), dense(num_classes), softmax()};
                break;
            case ArchId::M2:
                spec.layers = {dense(1024), relu(), dropout(0.5), dense(512), relu(), dropout(0.5),
                               dense(num_classes), softmax()};
                break;
            case ArchId::M3:
                spec.layers = {dense(256), relu(), dropout(0.5), dense(256), relu(), dropout(0.5),
                               dense(num_classes), softmax()};
                break;
        }
    } else {  // digits: desk-scale 12x12 template images
        spec.input = {0, 0, 0, 144};
        switch (id) {
            case ArchId::M1:
                spec.layers = {dense(128), relu(), dropout(0.25), dense(num_classes), softmax()};
                break;
            case ArchId::M2:
                spec.layers = {dense(256), relu(), dropout(0.2), dense(num_classes), softmax()};
                break;
            case ArchId::M3:
                spec.layers = {dense(96), relu(), dense(96), relu(), dense(num_classes), softmax()};
                break;
        }
    }
    return spec;
}

ArchitectureSpec build_generator(ArchFamily family) {
    ArchitectureSpec spec;
    spec.num_classes = 0;
    spec.name = std::string("gen_") + to_string(family);
    switch (family) {
        case ArchFamily::mnist:
            // convolutional encoder-decoder, ~227K params
            spec.input = {1, 28, 28, 0};
            spec.layers = {conv(56, 3, 1), relu(), conv(112, 3, 1), relu(), conv(112, 3, 1),
                           relu(), conv(56, 3, 1), relu(), conv(1, 3, 1), sigmoid()};
            break;
        case ArchFamily::wifi:
            // encoder-decoder MLP 520-256-256-520
            spec.input = {0, 0, 0, 520};
            spec.layers = {dense(256), relu(), dense(256), relu(), dense(520), sigmoid()};
            break;
        case ArchFamily::digits:
            spec.input = {0, 0, 0, 144};
            spec.layers = {dense(128), relu(), dense(128), relu(), dense(144), sigmoid()};
            break;
    }
    return spec;
}

ArchitectureSpec build_gan_discriminator(ArchFamily family) {
    ArchitectureSpec spec;
    spec.num_classes = 0;
    spec.name = std::string("gan_d_") + to_string(family);
    switch (family) {
        case ArchFamily::mnist:
            spec.input = {1, 28, 28, 0};
            spec.layers = {conv(16, 3), relu(), maxpool(), conv(32, 3), relu(), maxpool(),
                           dense(64), relu(), dense(1), sigmoid()};
            break;
        case ArchFamily::wifi:
            spec.input = {0, 0, 0, 520};
            spec.layers = {dense(256), relu(), dense(64), relu(), dense(1), sigmoid()};
            break;
        case ArchFamily::digits:
            spec.input = {0, 0, 0, 144};
            spec.layers = {dense(96), relu(), dense(1), sigmoid()};
            break;
    }
    return spec;
}

ArchitectureSpec make_mlp(const std::string& name, int input_dim,
                          const std::vector<int>& hidden, int num_classes, int out_dim) {
    ArchitectureSpec spec;
    spec.name = name;
    spec.input = {0, 0, 0, input_dim};
    spec.num_classes = num_classes;
    for (int hcount : hidden) {
        spec.layers.push_back(dense(hcount));
        spec.layers.push_back(relu());
    }
    if (num_classes > 0) {
        spec.layers.push_back(dense(num_classes));
        spec.layers.push_back(softmax());
    } else {
        spec.layers.push_back(dense(out_dim > 0 ? out_dim : input_dim));
        spec.layers.push_back(sigmoid());
    }
    return spec;
}

nn::Network build_network(const ArchitectureSpec& spec, std::uint64_t seed) {
    nn::Network net(seed);
    ShapeCursor cur{spec.input.image(), spec.input.c, spec.input.h, spec.input.w, spec.input.flat};
    for (const auto& l : spec.layers) {
        switch (l.kind) {
            case LayerKind::dense:
                net.add(std::make_unique<nn::Dense>(cur.dim(), l.units, net.rng()));
                break;
            case LayerKind::conv:
                if (!cur.image) throw UnshapedLayer(spec.name + ": conv on flat input");
                net.add(std::make_unique<nn::Conv2D>(cur.c, cur.h, cur.w, l.units, l.kh, l.kw,
                                                     l.pad, net.rng()));
                break;
            case LayerKind::maxpool:
                if (!cur.image) throw UnshapedLayer(spec.name + ": maxpool on flat input");
                net.add(std::make_unique<nn::MaxPool2x2>(cur.c, cur.h, cur.w));
                break;
            case LayerKind::relu:
                net.add(std::make_unique<nn::ActivationLayer>(nn::Activation::relu, cur.dim()));
                break;
            case LayerKind::sigmoid:
                net.add(std::make_unique<nn::ActivationLayer>(nn::Activation::sigmoid, cur.dim()));
                break;
            case LayerKind::tanh:
                net.add(std::make_unique<nn::ActivationLayer>(nn::Activation::tanh, cur.dim()));
                break;
            case LayerKind::softmax:
                net.add(std::make_unique<nn::Softmax>(cur.dim()));
                break;
            case LayerKind::dropout:
                net.add(std::make_unique<nn::Dropout>(l.rate, cur.dim(), &net.rng()));
                break;
        }
        cur = advance(cur, l, spec.name);
    }
    if (spec.num_classes > 0 && net.output_dim() != spec.num_classes)
        throw UnshapedLayer(spec.name + ": final width != class count");
    return net;
}

CostReport count_cost(const ArchitectureSpec& spec) {
    CostReport total;
    ShapeCursor cur{spec.input.image(), spec.input.c, spec.input.h, spec.input.w, spec.input.flat};
    if (cur.dim() <= 0) throw UnshapedLayer(spec.name + ": input shape undefined");
    for (const auto& l : spec.layers) {
        if (l.kind == LayerKind::dense) {
            std::uint64_t in = static_cast<std::uint64_t>(cur.dim());
            std::uint64_t out = static_cast<std::uint64_t>(l.units);
            total.params += in * out + out;
            total.flops += 2 * in * out;
        } else if (l.kind == LayerKind::conv) {
            if (!cur.image) throw UnshapedLayer(spec.name + ": conv on flat input");
            ShapeCursor next = advance(cur, l, spec.name);
            std::uint64_t k = static_cast<std::uint64_t>(cur.c) * l.kh * l.kw;
            total.params += (k + 1) * l.units;
            total.flops += 2 * k * l.units * next.h * next.w;
        }
        cur = advance(cur, l, spec.name);
    }
    return total;
}

void to_json(nlohmann::json& j, const ArchitectureSpec& spec) {
    static const char* kind_names[] = {"dense", "conv", "maxpool", "relu",
                                       "sigmoid", "tanh", "softmax", "dropout"};
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : spec.layers) {
        layers.push_back({{"kind", kind_names[static_cast<int>(l.kind)]},
                          {"units", l.units},
                          {"kh", l.kh},
                          {"kw", l.kw},
                          {"pad", l.pad},
                          {"rate", l.rate}});
    }
    j = {{"name", spec.name},
         {"input", {{"c", spec.input.c}, {"h", spec.input.h}, {"w", spec.input.w}, {"flat", spec.input.flat}}},
         {"num_classes", spec.num_classes},
         {"layers", layers}};
}

void from_json(const nlohmann::json& j, ArchitectureSpec& spec) {
    spec.name = j.at("name").get<std::string>();
    const auto& in = j.at("input");
    spec.input = {in.at("c").get<int>(), in.at("h").get<int>(), in.at("w").get<int>(),
                  in.at("flat").get<int>()};
    spec.num_classes = j.at("num_classes").get<int>();
    spec.layers.clear();
    for (const auto& jl : j.at("layers")) {
        LayerSpec l;
        std::string k = jl.at("kind").get<std::string>();
        if (k == "dense") l.kind = LayerKind::dense;
        else if (k == "conv") l.kind = LayerKind::conv;
        else if (k == "maxpool") l.kind = LayerKind::maxpool;
        else if (k == "relu") l.kind = LayerKind::relu;
        else if (k == "sigmoid") l.kind = LayerKind::sigmoid;
        else if (k == "tanh") l.kind = LayerKind::tanh;
        else if (k == "softmax") l.kind = LayerKind::softmax;
        else if (k == "dropout") l.kind = LayerKind::dropout;
        else throw UnknownArchitecture("unknown layer kind in spec: " + k);
        l.units = jl.at("units").get<int>();
        l.kh = jl.at("kh").get<int>();
        l.kw = jl.at("kw").get<int>();
        l.pad = jl.at("pad").get<int>();
        l.rate = jl.at("rate").get<double>();
        spec.layers.push_back(l);
    }
}

}  // namespace prgan::models
