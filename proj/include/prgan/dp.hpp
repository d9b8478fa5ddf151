#ifndef PRGAN_DP_HPP
#define PRGAN_DP_HPP

#include <cstdint>
#include <vector>

#include "prgan/dataset.hpp"
#include "prgan/gan.hpp"
#include "prgan/models.hpp"

namespace prgan::baselines {

// Laplace mechanism: epsilon = 1/b. Randomized response with truth
// probability p: epsilon = ln((1+p)/(1-p)).
struct DPParams {
    double epsilon = 0.0;
    double laplace_scale = 0.0;  // b, real-valued data
    double rr_truth_prob = 0.0;  // p, binary data

    static DPParams laplace(double b);
    static DPParams laplace_from_epsilon(double epsilon);
    static DPParams randomized_response(double p);
    static DPParams randomized_response_from_epsilon(double epsilon);
};

// Additive Laplace(b) noise per feature, output clipped to [0,1].
gan::PerturbedDataset laplace_perturb(const core::LabeledDataset& dataset, double b,
                                      std::uint64_t seed);

// Per bit: keep the true value with probability p, otherwise report a
// uniform coin.
gan::PerturbedDataset randomized_response(const core::LabeledDataset& dataset, double p,
                                          std::uint64_t seed);

// Log-spaced grid over [0.01, 10], at least 20 points.
std::vector<double> epsilon_grid(int points = 20, double lo = 0.01, double hi = 10.0);

struct DpSweepPoint {
    double epsilon = 0.0;
    double acc_target_val = 0.0;     // validation Acc(D_L)
    double acc_sensitive_val = 0.0;  // validation Acc(D_P)
};

struct DpSweepResult {
    double chosen_epsilon = 0.0;
    gan::PerturbedDataset perturbed;  // report set perturbed with the chosen mechanism
    double acc_sensitive = 0.0;       // Acc(D_P) on the perturbed report set
    double acc_target = 0.0;          // Acc(D_L) on the perturbed report set
    std::vector<DpSweepPoint> points;
};

// Picks the largest epsilon whose validation Acc(D_L) stays at or above the
// threshold; the mechanism follows the dataset kind (Laplace for
// real-valued, randomized response for binary). Throws NoFeasibleEpsilon.
DpSweepResult dp_sweep(const core::LabeledDataset& validation,
                       const core::LabeledDataset& report_set,
                       const models::TrainedModel& d_target,
                       const models::TrainedModel& d_sensitive, double threshold,
                       std::uint64_t seed, int grid_points = 20);

}  // namespace prgan::baselines

#endif
