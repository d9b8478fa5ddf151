#include "prgan/dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "prgan/errors.hpp"

namespace prgan::baselines {

DPParams DPParams::laplace(double b) {
    if (!(b > 0)) throw OutOfRange("laplace scale must be positive");
    return {1.0 / b, b, 0.0};
}

DPParams DPParams::laplace_from_epsilon(double epsilon) {
    if (!(epsilon > 0)) throw OutOfRange("epsilon must be positive");
    return {epsilon, 1.0 / epsilon, 0.0};
}

DPParams DPParams::randomized_response(double p) {
    if (p < 0 || p >= 1) throw OutOfRange("truth probability must lie in [0,1)");
    return {std::log((1.0 + p) / (1.0 - p)), 0.0, p};
}

DPParams DPParams::randomized_response_from_epsilon(double epsilon) {
    if (!(epsilon >= 0)) throw OutOfRange("epsilon must be non-negative");
    double e = std::exp(epsilon);
    return {epsilon, 0.0, (e - 1.0) / (e + 1.0)};
}

namespace {
gan::PerturbedDataset make_result(const core::LabeledDataset& src, const char* label) {
    gan::PerturbedDataset out;
    out.data = src;
    out.provenance.generator_id = label;
    out.provenance.source_hash = hash_hex(src.content_hash());
    return out;
}
}  // namespace

gan::PerturbedDataset laplace_perturb(const core::LabeledDataset& dataset, double b,
                                      std::uint64_t seed) {
    if (dataset.kind != core::DataKind::real_valued)
        throw WrongKind("laplace_perturb expects real-valued data");
    if (!(b > 0)) throw OutOfRange("laplace scale must be positive");
    char label[64];
    std::snprintf(label, sizeof(label), "laplace(b=%g)", b);
    auto out = make_result(dataset, label);
    Rng rng(seed);
    for (auto& v : out.data.features) v = std::clamp(v + laplace(rng, b), 0.0, 1.0);
    return out;
}

gan::PerturbedDataset randomized_response(const core::LabeledDataset& dataset, double p,
                                          std::uint64_t seed) {
    if (dataset.kind != core::DataKind::binary)
        throw WrongKind("randomized_response expects binary data");
    if (p < 0 || p >= 1) throw OutOfRange("truth probability must lie in [0,1)");
    char label[64];
    std::snprintf(label, sizeof(label), "rr(p=%g)", p);
    auto out = make_result(dataset, label);
    Rng rng(seed);
    for (auto& v : out.data.features) {
        if (uniform01(rng) < p) continue;              // report the true bit
        v = uniform01(rng) < 0.5 ? 0.0 : 1.0;          // else a uniform coin
    }
    return out;
}

std::vector<double> epsilon_grid(int points, double lo, double hi) {
    if (points < 2) throw OutOfRange("epsilon grid needs at least 2 points");
    std::vector<double> grid(points);
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < points; ++i)
        grid[i] = std::pow(10.0, llo + (lhi - llo) * i / (points - 1));
    return grid;
}

DpSweepResult dp_sweep(const core::LabeledDataset& validation,
                       const core::LabeledDataset& report_set,
                       const models::TrainedModel& d_target,
                       const models::TrainedModel& d_sensitive, double threshold,
                       std::uint64_t seed, int grid_points) {
    auto grid = epsilon_grid(grid_points);
    auto mechanism = [&](const core::LabeledDataset& ds, double eps, std::uint64_t s) {
        return ds.kind == core::DataKind::real_valued
                   ? laplace_perturb(ds, DPParams::laplace_from_epsilon(eps).laplace_scale, s)
                   : randomized_response(ds, DPParams::randomized_response_from_epsilon(eps).rr_truth_prob, s);
    };

    auto dl = d_target.clone();
    auto dp = d_sensitive.clone();

    DpSweepResult result;
    int chosen = -1;
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
        auto pv = mechanism(validation, grid[i], seed + i);
        DpSweepPoint pt;
        pt.epsilon = grid[i];
        pt.acc_target_val = models::accuracy(dl, pv.data.features, pv.data.target_labels);
        pt.acc_sensitive_val = models::accuracy(dp, pv.data.features, pv.data.sensitive_labels);
        result.points.push_back(pt);
        if (pt.acc_target_val >= threshold && (chosen < 0 || grid[i] > grid[chosen]))
            chosen = i;
    }
    if (chosen < 0)
        throw NoFeasibleEpsilon("dp_sweep: no epsilon keeps the utility threshold");

    result.chosen_epsilon = grid[chosen];
    result.perturbed = mechanism(report_set, grid[chosen], seed ^ 0x5e9ULL);
    result.acc_sensitive =
        models::accuracy(dp, result.perturbed.data.features, result.perturbed.data.sensitive_labels);
    result.acc_target =
        models::accuracy(dl, result.perturbed.data.features, result.perturbed.data.target_labels);
    return result;
}

}  // namespace prgan::baselines
