#include "prgan/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"

namespace prgan::cli {

void RunConfig::validate() const {
    bool has_t = threshold > 0.0;
    bool has_b = budget > 0.0;
    if (has_t == has_b)
        throw OutOfRange("config must set exactly one of threshold/budget");
    if (has_t && threshold > 1.0) throw OutOfRange("threshold must lie in (0,1]");
    if (has_b && budget > 1.0) throw OutOfRange("budget must lie in (0,1]");
}

std::map<std::string, std::string> RunConfig::to_kv() const {
    std::map<std::string, std::string> kv;
    auto num = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };
    kv["dataset"] = dataset;
    if (!images.empty()) kv["images"] = images;
    if (!labels.empty()) kv["labels"] = labels;
    if (!csv.empty()) kv["csv"] = csv;
    kv["n"] = std::to_string(synth_n);
    kv["seed"] = std::to_string(seed);
    kv["method"] = method;
    kv["lambda"] = num(hyper.lambda_tradeoff);
    kv["alpha"] = num(hyper.alpha);
    kv["beta"] = num(hyper.beta_hinge);
    kv["c"] = num(hyper.hinge_cap);
    kv["steps_per_side"] = std::to_string(hyper.steps_per_side);
    kv["epochs"] = std::to_string(hyper.epochs);
    kv["batch"] = std::to_string(hyper.batch);
    kv["lr"] = num(hyper.lr);
    if (threshold > 0) kv["threshold"] = num(threshold);
    if (budget > 0) kv["budget"] = num(budget);
    auto join = [&](const std::vector<double>& v) {
        std::ostringstream s;
        for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
        return s.str();
    };
    if (!lambda_grid.empty()) kv["lambda_grid"] = join(lambda_grid);
    if (!beta_grid.empty()) kv["beta_grid"] = join(beta_grid);
    kv["dp_grid_points"] = std::to_string(dp_grid_points);
    kv["classifier_epochs"] = std::to_string(classifier_epochs);
    return kv;
}

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

RunConfig parse_config_kv(const std::map<std::string, std::string>& kv) {
    RunConfig cfg;
    for (const auto& [key, value] : kv) {
        try {
            if (key == "dataset") cfg.dataset = value;
            else if (key == "images") cfg.images = value;
            else if (key == "labels") cfg.labels = value;
            else if (key == "csv") cfg.csv = value;
            else if (key == "n") cfg.synth_n = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "method") cfg.method = value;
            else if (key == "lambda") cfg.hyper.lambda_tradeoff = std::stod(value);
            else if (key == "alpha") cfg.hyper.alpha = std::stod(value);
            else if (key == "beta") cfg.hyper.beta_hinge = std::stod(value);
            else if (key == "c") cfg.hyper.hinge_cap = std::stod(value);
            else if (key == "steps_per_side") cfg.hyper.steps_per_side = std::stoi(value);
            else if (key == "epochs") cfg.hyper.epochs = std::stoi(value);
            else if (key == "batch") cfg.hyper.batch = std::stoi(value);
            else if (key == "lr") cfg.hyper.lr = std::stod(value);
            else if (key == "threshold") cfg.threshold = std::stod(value);
            else if (key == "budget") cfg.budget = std::stod(value);
            else if (key == "lambda_grid") cfg.lambda_grid = parse_list(value);
            else if (key == "beta_grid") cfg.beta_grid = parse_list(value);
            else if (key == "dp_grid_points") cfg.dp_grid_points = std::stoi(value);
            else if (key == "classifier_epochs") cfg.classifier_epochs = std::stoi(value);
            else throw SchemaMismatch("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw SchemaMismatch("bad value for config key " + key + ": " + value);
        } catch (const std::out_of_range&) {
            throw SchemaMismatch("value out of range for config key " + key + ": " + value);
        }
    }
    return cfg;
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingArtifact("cannot open config: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaMismatch(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(start, eq - start);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        std::size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? "" : value.substr(vs);
        kv[key] = value;
    }
    return kv;
}

RunConfig parse_config_file(const std::string& path) {
    return parse_config_kv(read_kv_file(path));
}

models::ArchFamily family_for_dataset(const std::string& dataset) {
    if (dataset == "mnist") return models::ArchFamily::mnist;
    if (dataset == "uji" || dataset == "synth-uji") return models::ArchFamily::wifi;
    if (dataset == "synth-digits") return models::ArchFamily::digits;
    throw SchemaMismatch("unknown dataset: " + dataset);
}

void Manifest::record(const std::string& label, const std::string& path) {
    outputs_.push_back({label, path});
}

void Manifest::write(const std::string& path) const {
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [label, file] : outputs_)
        outputs.push_back({{"label", label},
                           {"path", file},
                           {"hash", hash_hex(hash_file(file))}});
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : config_) cfg[k] = v;
    nlohmann::json j = {{"run_id", run_id_}, {"config", cfg}, {"outputs", outputs}};
    write_text_file(path, j.dump(2) + "\n");
}

RunPaths make_run_dirs(const std::string& artifact_root, const std::string& run_id) {
    RunPaths paths;
    paths.root = artifact_root + "/" + run_id;
    paths.data = paths.root + "/data";
    paths.checkpoints = paths.root + "/checkpoints";
    paths.reports = paths.root + "/reports";
    std::filesystem::create_directories(paths.data);
    std::filesystem::create_directories(paths.checkpoints);
    std::filesystem::create_directories(paths.reports);
    return paths;
}

}  // namespace prgan::cli
