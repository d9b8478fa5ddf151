#ifndef PRGAN_GAN_HPP
#define PRGAN_GAN_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prgan/dataset.hpp"
#include "prgan/models.hpp"

namespace prgan::gan {

struct HyperParams {
    double lambda_tradeoff = 1.0;  // privacy weight inside the adversarial term
    double alpha = 1.0;            // weight of the adversarial term
    double beta_hinge = 1.0;       // weight of the hinge term
    double hinge_cap = 0.0;        // allowed perturbation norm before loss
    int steps_per_side = 1;
    int epochs = 30;
    int batch = 128;
    double lr = 1e-3;
    double disc_lr = 0.0;  // GAN discriminator step size; 0 means lr / 4
    std::uint64_t seed = 1;

    double effective_disc_lr() const { return disc_lr > 0 ? disc_lr : lr / 4.0; }
    void validate() const;
};

void to_json(nlohmann::json& j, const HyperParams& hp);
void from_json(const nlohmann::json& j, HyperParams& hp);

// Which network feeds the generator objective. PR-GAN keeps both; NGP drops
// the GAN discriminator, AP drops the target classifier. One trainer serves
// all three so the ablations differ in nothing else.
struct TrainerFlags {
    bool use_gan_discriminator = true;
    bool use_target_classifier = true;
};

inline TrainerFlags prgan_flags() { return {true, true}; }
inline TrainerFlags ngp_flags() { return {false, true}; }
inline TrainerFlags ap_flags() { return {true, false}; }

// Column-oriented per-step loss log; absent terms have no column at all.
struct LossLog {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    bool has_column(const std::string& name) const;
    void write_csv(const std::string& path) const;
};

struct GeneratorModel {
    models::TrainedModel model;
    core::DataKind kind = core::DataKind::real_valued;
    std::string id() const { return model.spec.name + "-" + hash_hex(model.net.param_hash()); }
};

struct PerturbationProvenance {
    std::string generator_id;
    std::string source_hash;
    HyperParams hyperparams;
};

struct PerturbedDataset {
    core::LabeledDataset data;
    PerturbationProvenance provenance;
};

struct GanTrainingInputs {
    const core::LabeledDataset* train = nullptr;         // slice B train part
    const models::TrainedModel* d_target = nullptr;      // frozen
    const models::TrainedModel* d_sensitive = nullptr;   // frozen
    models::ArchitectureSpec generator_spec;
    models::ArchitectureSpec discriminator_spec;
};

struct GanResult {
    GeneratorModel generator;
    std::optional<models::TrainedModel> discriminator;
};

// Alternating training against the frozen classifiers: per batch,
// steps_per_side discriminator updates then steps_per_side generator updates.
// Asserts the frozen checkpoints are unchanged every epoch.
GanResult train_prgan(const GanTrainingInputs& in, const HyperParams& hp,
                      TrainerFlags flags = prgan_flags(), LossLog* log = nullptr);

GanResult train_ngp(const GanTrainingInputs& in, const HyperParams& hp, LossLog* log = nullptr);
GanResult train_ap(const GanTrainingInputs& in, const HyperParams& hp, LossLog* log = nullptr);

// Record-wise G(X); binary-kind outputs thresholded at 0.5.
PerturbedDataset perturb(GeneratorModel& generator, const core::LabeledDataset& dataset);

void write_perturbed_sidecar(const PerturbedDataset& pd, const std::string& path);

enum class TuneMode { threshold, budget };

struct TuneCandidate {
    HyperParams hp;
    GeneratorModel generator;
    double acc_target = 0.0;     // validation Acc(D_L) on perturbed data
    double acc_sensitive = 0.0;  // validation Acc(D_P) on perturbed data
    double mean_norm = 0.0;      // mean perturbation norm on validation
    bool feasible = false;
};

struct TuneResult {
    int best_index = -1;
    std::vector<TuneCandidate> candidates;
    const TuneCandidate& best() const { return candidates[best_index]; }
};

// Re-splits the slice-B train part 4:1 (class proportions preserved), trains
// one candidate per grid entry (seed + index), and selects: threshold mode
// minimizes Acc(D_P) subject to Acc(D_L) >= value; budget mode maximizes
// Acc(D_L) subject to Acc(D_P) <= value. Ties break on smaller mean norm.
// Throws NoFeasibleCandidate when the feasible set is empty.
TuneResult tune(const GanTrainingInputs& in, const std::vector<HyperParams>& grid,
                TuneMode mode, double value, TrainerFlags flags = prgan_flags());

// The candidate sweep behind tune(), without the selection step.
std::vector<TuneCandidate> tune_candidates(const GanTrainingInputs& in,
                                           const std::vector<HyperParams>& grid,
                                           TrainerFlags flags);
int select_candidate(const std::vector<TuneCandidate>& candidates, TuneMode mode, double value);

}  // namespace prgan::gan

#endif
