#ifndef PRGAN_MANIFEST_HPP
#define PRGAN_MANIFEST_HPP

#include <map>
#include <string>
#include <vector>

#include "prgan/evalproto.hpp"
#include "prgan/gan.hpp"

namespace prgan::cli {

// Flat key=value run configuration ('#' starts a comment). Documented keys:
// dataset, images, labels, csv, n, seed, method, lambda, alpha, beta, c,
// steps_per_side, epochs, batch, lr, threshold, budget, lambda_grid,
// beta_grid, dp_grid_points, classifier_epochs.
struct RunConfig {
    std::string dataset;  // mnist | uji | synth-digits | synth-uji
    std::string images, labels, csv;
    int synth_n = 5200;
    std::uint64_t seed = 7;
    std::string method = "prgan";
    gan::HyperParams hyper;
    double threshold = -1.0;  // T: minimum Acc(D_L)
    double budget = -1.0;     // B: maximum Acc(D_P)
    std::vector<double> lambda_grid, beta_grid;
    int dp_grid_points = 20;
    int classifier_epochs = 30;

    // exactly one of threshold/budget drives tuning
    void validate() const;
    std::map<std::string, std::string> to_kv() const;
};

RunConfig parse_config_kv(const std::map<std::string, std::string>& kv);
RunConfig parse_config_file(const std::string& path);
std::map<std::string, std::string> read_kv_file(const std::string& path);

models::ArchFamily family_for_dataset(const std::string& dataset);

// Content-hash inventory of a run directory; the config echo plus hashed
// outputs make a run reproducible from the manifest alone.
class Manifest {
public:
    Manifest(std::string run_id, std::map<std::string, std::string> config)
        : run_id_(std::move(run_id)), config_(std::move(config)) {}

    void record(const std::string& label, const std::string& path);
    void write(const std::string& path) const;

private:
    std::string run_id_;
    std::map<std::string, std::string> config_;
    std::vector<std::pair<std::string, std::string>> outputs_;  // label -> path
};

struct RunPaths {
    std::string root, data, checkpoints, reports;
    std::string manifest_file() const { return root + "/manifest.json"; }
};

// runs/<run-id>/{data, checkpoints, reports}; creates the directories.
RunPaths make_run_dirs(const std::string& artifact_root, const std::string& run_id);

}  // namespace prgan::cli

#endif
