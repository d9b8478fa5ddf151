#include "prgan/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"
#include "prgan/util.hpp"

namespace prgan::models {

TrainedModel TrainedModel::clone() const {
    TrainedModel out{spec, build_network(spec, meta.seed), meta};
    out.net.import_params(net.export_params());
    return out;
}

const std::vector<double>& TrainedModel::predict(const std::vector<double>& x, int n) {
    return net.forward(x, n, /*train=*/false);
}

TrainedModel train_classifier(const ArchitectureSpec& spec, DataView train, const TrainConfig& cfg) {
    if (train.empty()) throw EmptyEvaluationSet("train_classifier: empty training set");
    for (int i = 0; i < train.n; ++i)
        if (train.y[i] < 0 || train.y[i] >= spec.num_classes)
            throw OutOfRange("train_classifier: label outside the spec's output width");

    TrainedModel model{spec, build_network(spec, cfg.seed), {}};
    model.meta.epochs = cfg.epochs;
    model.meta.seed = cfg.seed;
    model.meta.slice = cfg.slice_name;

    nn::Adam adam(cfg.lr);
    Rng order_rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<int> order(train.n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> xb;
    std::vector<int> yb;
    std::vector<double> gy;
    std::vector<double> best_params;
    double best_acc = -1.0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_vec(order, order_rng);
        double loss_sum = 0.0;
        int batches = 0;
        for (int start = 0; start < train.n; start += cfg.batch) {
            int bs = std::min(cfg.batch, train.n - start);
            xb.resize(static_cast<std::size_t>(bs) * train.dim);
            yb.resize(bs);
            for (int i = 0; i < bs; ++i) {
                int r = order[start + i];
                std::memcpy(xb.data() + static_cast<std::size_t>(i) * train.dim,
                            train.x + static_cast<std::size_t>(r) * train.dim,
                            sizeof(double) * train.dim);
                yb[i] = train.y[r];
            }
            const auto& probs = model.net.forward(xb, bs, /*train=*/true);
            double loss = nn::cross_entropy(probs, yb, bs, spec.num_classes, &gy);
            if (!std::isfinite(loss))
                throw Divergence("train_classifier: non-finite loss at epoch " +
                                 std::to_string(epoch));
            model.net.backward(gy, bs);
            adam.step(model.net);
            loss_sum += loss;
            ++batches;
        }
        model.meta.epoch_losses.push_back(loss_sum / std::max(batches, 1));

        if (!cfg.heldout.empty()) {
            double acc = accuracy(model, cfg.heldout);
            if (acc > best_acc) {
                best_acc = acc;
                best_params = model.net.export_params();
            }
        }
    }

    if (!best_params.empty()) {
        model.net.import_params(best_params);
        model.meta.best_heldout_acc = best_acc;
    }
    return model;
}

double accuracy(TrainedModel& model, DataView examples) {
    if (examples.empty()) throw EmptyEvaluationSet("accuracy: no examples");
    int classes = model.net.output_dim();
    int correct = 0;
    const int chunk = 256;
    std::vector<double> xb;
    for (int start = 0; start < examples.n; start += chunk) {
        int bs = std::min(chunk, examples.n - start);
        xb.assign(examples.x + static_cast<std::size_t>(start) * examples.dim,
                  examples.x + static_cast<std::size_t>(start + bs) * examples.dim);
        const auto& probs = model.net.forward(xb, bs, /*train=*/false);
        auto pred = nn::argmax_rows(probs, bs, classes);
        for (int i = 0; i < bs; ++i)
            if (pred[i] == examples.y[start + i]) ++correct;
    }
    return static_cast<double>(correct) / examples.n;
}

double accuracy(TrainedModel& model, const std::vector<double>& x, const std::vector<int>& y) {
    DataView v{x.data(), y.data(), static_cast<int>(y.size()),
               y.empty() ? 0 : static_cast<int>(x.size() / y.size())};
    return accuracy(model, v);
}

namespace {
constexpr char kMagic[8] = {'P', 'R', 'G', 'A', 'N', 'C', 'P', '1'};
}

void save_checkpoint(const TrainedModel& model, const std::string& path) {
    nlohmann::json arch_j;
    to_json(arch_j, model.spec);
    nlohmann::json header = {
        {"format_version", 1},
        {"arch", arch_j},
        {"meta",
         {{"epochs", model.meta.epochs},
          {"seed", model.meta.seed},
          {"slice", model.meta.slice},
          {"best_heldout_acc", model.meta.best_heldout_acc}}},
    };
    auto params = model.net.export_params();
    header["param_count"] = params.size();

    std::string hs = header.dump();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    std::uint64_t hlen = hs.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    out.write(reinterpret_cast<const char*>(params.data()),
              static_cast<std::streamsize>(params.size() * sizeof(double)));
}

TrainedModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw SchemaMismatch("not a checkpoint file: " + path);
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string hs(hlen, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(hlen));
    nlohmann::json header = nlohmann::json::parse(hs);

    ArchitectureSpec spec;
    from_json(header.at("arch"), spec);
    TrainingMeta meta;
    meta.epochs = header.at("meta").at("epochs").get<int>();
    meta.seed = header.at("meta").at("seed").get<std::uint64_t>();
    meta.slice = header.at("meta").at("slice").get<std::string>();
    meta.best_heldout_acc = header.at("meta").at("best_heldout_acc").get<double>();

    std::vector<double> params(header.at("param_count").get<std::size_t>());
    in.read(reinterpret_cast<char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
    if (!in) throw SchemaMismatch("truncated checkpoint: " + path);

    TrainedModel model{spec, build_network(spec, meta.seed), meta};
    model.net.import_params(params);
    return model;
}

}  // namespace prgan::models
