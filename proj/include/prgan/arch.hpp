#ifndef PRGAN_ARCH_HPP
#define PRGAN_ARCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prgan/nn.hpp"

namespace prgan::models {

enum class LayerKind { dense, conv, maxpool, relu, sigmoid, tanh, softmax, dropout };

// One row of an architecture table. conv: units = channels, kh/kw/pad set;
// dense: units = width; dropout: rate set; the rest carry no fields.
struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    int units = 0;
    int kh = 0, kw = 0, pad = 0;
    double rate = 0.0;
};

enum class ArchId { M1, M2, M3 };
enum class ArchFamily { mnist, wifi, digits };

struct InputShape {
    int c = 0, h = 0, w = 0;  // image when c > 0
    int flat = 0;             // used when c == 0
    int dim() const { return c > 0 ? c * h * w : flat; }
    bool image() const { return c > 0; }
};

struct ArchitectureSpec {
    std::string name;
    InputShape input;
    std::vector<LayerSpec> layers;
    int num_classes = 0;  // 0 for generators / gan discriminators
};

struct CostReport {
    std::uint64_t flops = 0;   // multiply-add pairs counted as 2 ops
    std::uint64_t params = 0;  // trainable weights + biases
};

const char* to_string(ArchId id);
const char* to_string(ArchFamily f);
ArchId arch_id_from_string(const std::string& s);
ArchFamily arch_family_from_string(const std::string& s);

// Classifier tables, one row per appendix entry; UnknownArchitecture when the
// (id, family) pair is not registered.
ArchitectureSpec build_classifier(ArchId id, ArchFamily family, int num_classes);

// Perturbation generators and GAN discriminators, one per data family.
ArchitectureSpec build_generator(ArchFamily family);
ArchitectureSpec build_gan_discriminator(ArchFamily family);

// Plain MLP helper for tests and toy problems. hidden widths get relu;
// ends with dense(num_classes)+softmax when num_classes > 0, else
// dense(out_dim)+sigmoid.
ArchitectureSpec make_mlp(const std::string& name, int input_dim,
                          const std::vector<int>& hidden, int num_classes, int out_dim = 0);

nn::Network build_network(const ArchitectureSpec& spec, std::uint64_t seed);

CostReport count_cost(const ArchitectureSpec& spec);

void to_json(nlohmann::json& j, const ArchitectureSpec& spec);
void from_json(const nlohmann::json& j, ArchitectureSpec& spec);

}  // namespace prgan::models

#endif
