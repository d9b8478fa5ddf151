#ifndef PRGAN_EVALPROTO_HPP
#define PRGAN_EVALPROTO_HPP

#include <string>
#include <vector>

#include "prgan/dataset.hpp"
#include "prgan/dp.hpp"
#include "prgan/gan.hpp"
#include "prgan/models.hpp"

namespace prgan::eval {

// Drop metrics for the architecture-transfer study. acc_m is the model used
// during tuning, acc_mprime the unseen one, acc_rc the random-classifier
// floor (1 / number of classes).
double utility_drop(double acc_m, double acc_mprime);
double privacy_drop(double acc_m, double acc_mprime, double acc_rc);

inline models::DataView view_target(const core::LabeledDataset& ds) {
    return {ds.features.data(), ds.target_labels.data(), ds.num_records, ds.dim};
}
inline models::DataView view_sensitive(const core::LabeledDataset& ds) {
    return {ds.features.data(), ds.sensitive_labels.data(), ds.num_records, ds.dim};
}

struct ClassifierTrainOptions {
    int epochs = 30;
    int batch = 128;
    double lr = 1e-3;
};

// Everything the experiment protocols share: the three-slice plan, the
// frozen classifiers trained on slice A, the slice-B tuning data with its
// validation subset, and reference accuracies on untouched data.
struct Protocol {
    core::LabeledDataset dataset;
    core::SplitPlan plan;
    models::ArchFamily family;
    std::uint64_t seed = 0;

    models::TrainedModel d_target, d_sensitive;
    models::ArchitectureSpec generator_spec, discriminator_spec;

    core::LabeledDataset a_train, a_test, b_train, c_train, c_test;
    core::LabeledDataset b_val;  // the validation subset tune() carves out of b_train

    double orig_acc_target_c = 0, orig_acc_sensitive_c = 0;      // on c_test
    double orig_acc_target_val = 0, orig_acc_sensitive_val = 0;  // on b_val

    gan::GanTrainingInputs gan_inputs() const;
    // Grid entries share the protocol seed so every method sees the same
    // validation records.
    std::vector<gan::HyperParams> seeded_grid(std::vector<gan::HyperParams> grid) const;
};

Protocol prepare_protocol(const core::LabeledDataset& ds, models::ArchFamily family,
                          std::uint64_t seed, const ClassifierTrainOptions& copts = {});

struct ReportRow {
    std::string method;
    bool feasible = true;
    double acc_target = 0.0;
    double acc_sensitive = 0.0;
    std::string constraint;
    std::string detail;
};

struct EvaluationReport {
    std::string dataset_name;
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> provenance;

    std::string to_csv() const;
    void write_csv(const std::string& path) const;
    void write_json(const std::string& path) const;
};

enum class Method { PRGAN, NGP, AP, DP };
const char* to_string(Method m);
Method method_from_string(const std::string& s);

struct PerformanceOptions {
    double threshold = 0.95;
    std::vector<gan::HyperParams> grid;
    int dp_grid_points = 20;
};

// One row per method at a fixed utility threshold, all reported on the same
// slice C test records, plus the non-perturbed "Original" row.
EvaluationReport run_performance_table(Protocol& p, const std::vector<Method>& methods,
                                       const PerformanceOptions& opts);

struct TradeoffPoint {
    std::string method;
    double budget = 0.0;
    bool feasible = false;
    double achieved_privacy = 0.0;  // drop of Acc(D_P) on slice C test
    double utility_drop_c = 0.0;    // drop of Acc(D_L) on slice C test
    double acc_target = 0.0, acc_sensitive = 0.0;
};

std::vector<TradeoffPoint> run_tradeoff_sweep(Protocol& p, const std::vector<Method>& methods,
                                              const std::vector<double>& budgets,
                                              const PerformanceOptions& opts);

struct TransferModelRow {
    std::string arch;
    double acc_target = 0.0;
    double acc_sensitive = 0.0;
};

struct TransferReport {
    std::vector<TransferModelRow> rows;  // M1, M2, M3
    double random_classifier = 0.0;
    double avg_utility_drop = 0.0;
    double avg_privacy_drop = 0.0;
};

// New architectures trained on the original slice-A training data, evaluated
// on the perturbed slice C test records.
TransferReport run_transferability(Protocol& p, const core::LabeledDataset& perturbed_c_test,
                                   const ClassifierTrainOptions& copts = {});

// Fresh model trained on perturbed records with original target labels,
// scored on original test data.
double run_training_utility(Protocol& p, const core::LabeledDataset& perturbed_train,
                            const core::LabeledDataset& original_test, models::ArchId arch,
                            const ClassifierTrainOptions& copts = {});

void write_tradeoff_csv(const std::vector<TradeoffPoint>& points, const std::string& path);

}  // namespace prgan::eval

#endif
