#ifndef PRGAN_MODELS_HPP
#define PRGAN_MODELS_HPP

#include <optional>
#include <string>
#include <vector>

#include "prgan/arch.hpp"
#include "prgan/nn.hpp"

namespace prgan::models {

// Borrowed rows: x is [n, dim] row-major, y optional labels.
struct DataView {
    const double* x = nullptr;
    const int* y = nullptr;
    int n = 0;
    int dim = 0;
    bool empty() const { return n == 0; }
};

struct TrainingMeta {
    int epochs = 0;
    std::uint64_t seed = 0;
    std::string slice;
    std::vector<double> epoch_losses;   // mean training loss per epoch
    double best_heldout_acc = -1.0;     // -1 when no held-out set was given
};

struct TrainConfig {
    int epochs = 30;
    int batch = 128;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    DataView heldout;        // picks the best checkpoint by held-out accuracy
    std::string slice_name;  // provenance only
};

// A built network plus the spec that produced it. Runtime buffers inside the
// network are per-instance; concurrent users clone instead of sharing.
struct TrainedModel {
    ArchitectureSpec spec;
    nn::Network net;
    TrainingMeta meta;

    TrainedModel clone() const;
    // eval-mode probabilities, [n, output_dim]
    const std::vector<double>& predict(const std::vector<double>& x, int n);
    std::uint64_t checkpoint_hash() const { return net.param_hash(); }
};

TrainedModel train_classifier(const ArchitectureSpec& spec, DataView train, const TrainConfig& cfg);

double accuracy(TrainedModel& model, DataView examples);
double accuracy(TrainedModel& model, const std::vector<double>& x, const std::vector<int>& y);

void save_checkpoint(const TrainedModel& model, const std::string& path);
TrainedModel load_checkpoint(const std::string& path);

}  // namespace prgan::models

#endif
