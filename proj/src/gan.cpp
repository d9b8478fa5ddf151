#include "prgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"
#include "prgan/losses.hpp"

namespace prgan::gan {

void HyperParams::validate() const {
    if (lambda_tradeoff < 0 || alpha < 0 || beta_hinge < 0)
        throw OutOfRange("hyperparams: loss weights must be non-negative");
    if (!(hinge_cap >= 0) || !std::isfinite(hinge_cap))
        throw OutOfRange("hyperparams: hinge cap must be finite and non-negative");
    if (steps_per_side < 1 || epochs < 1 || batch < 1)
        throw OutOfRange("hyperparams: counts must be positive");
}

void to_json(nlohmann::json& j, const HyperParams& hp) {
    j = {{"lambda", hp.lambda_tradeoff}, {"alpha", hp.alpha},   {"beta", hp.beta_hinge},
         {"c", hp.hinge_cap},            {"steps_per_side", hp.steps_per_side},
         {"epochs", hp.epochs},          {"batch", hp.batch},   {"lr", hp.lr},
         {"disc_lr", hp.disc_lr}, {"seed", hp.seed}};
}

void from_json(const nlohmann::json& j, HyperParams& hp) {
    hp.lambda_tradeoff = j.at("lambda").get<double>();
    hp.alpha = j.at("alpha").get<double>();
    hp.beta_hinge = j.at("beta").get<double>();
    hp.hinge_cap = j.at("c").get<double>();
    hp.steps_per_side = j.at("steps_per_side").get<int>();
    hp.epochs = j.at("epochs").get<int>();
    hp.batch = j.at("batch").get<int>();
    hp.lr = j.at("lr").get<double>();
    hp.disc_lr = j.value("disc_lr", 0.0);
    hp.seed = j.at("seed").get<std::uint64_t>();
}

bool LossLog::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void LossLog::write_csv(const std::string& path) const {
    std::ostringstream out;
    out << "step";
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << i;
        for (double v : rows[i]) out << ',' << v;
        out << '\n';
    }
    write_text_file(path, out.str());
}

namespace {

void gather_rows(const core::LabeledDataset& ds, const std::vector<int>& order, int start, int bs,
                 std::vector<double>& xb, std::vector<int>& yl, std::vector<int>& yp) {
    xb.resize(static_cast<std::size_t>(bs) * ds.dim);
    yl.resize(bs);
    yp.resize(bs);
    for (int i = 0; i < bs; ++i) {
        int r = order[start + i];
        std::memcpy(xb.data() + static_cast<std::size_t>(i) * ds.dim,
                    ds.features.data() + static_cast<std::size_t>(r) * ds.dim,
                    sizeof(double) * ds.dim);
        yl[i] = ds.target_labels[r];
        yp[i] = ds.sensitive_labels[r];
    }
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw Divergence(std::string("non-finite ") + what);
}

}  // namespace

GanResult train_prgan(const GanTrainingInputs& in, const HyperParams& hp,
                      TrainerFlags flags, LossLog* log) {
    hp.validate();
    const auto& ds = *in.train;
    if (ds.num_records == 0) throw EmptyEvaluationSet("train_prgan: empty training slice");
    if (in.generator_spec.input.dim() != ds.dim)
        throw ShapeMismatch("train_prgan: generator input dim != feature dim");

    // frozen classifiers run on private clones; originals must not change
    auto d_l = in.d_target->clone();
    auto d_p = in.d_sensitive->clone();
    const std::uint64_t frozen_l = d_l.net.param_hash();
    const std::uint64_t frozen_p = d_p.net.param_hash();
    const int kl = d_l.net.output_dim();
    const int kp = d_p.net.output_dim();

    models::TrainedModel gen{in.generator_spec, models::build_network(in.generator_spec, hp.seed), {}};
    gen.meta.seed = hp.seed;
    gen.meta.epochs = hp.epochs;

    std::optional<models::TrainedModel> disc;
    if (flags.use_gan_discriminator) {
        disc.emplace(models::TrainedModel{in.discriminator_spec,
                                          models::build_network(in.discriminator_spec, hp.seed ^ 0xd15cULL),
                                          {}});
    }

    nn::Adam adam_g(hp.lr);
    nn::Adam adam_d(hp.effective_disc_lr());

    if (log) {
        log->columns.clear();
        if (flags.use_gan_discriminator) {
            log->columns.push_back("L_D");
            log->columns.push_back("L_GAN");
        }
        if (flags.use_target_classifier) log->columns.push_back("L_target");
        log->columns.push_back("L_sensitive");
        log->columns.push_back("L_Adv");
        log->columns.push_back("L_hinge");
        log->columns.push_back("L_G");
    }

    Rng order_rng(hp.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<int> order(ds.num_records);
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> xb, gen_gy, gy_fake, d_concat;
    std::vector<int> yl, yp;

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        shuffle_vec(order, order_rng);
        for (int start = 0; start < ds.num_records; start += hp.batch) {
            int bs = std::min(hp.batch, ds.num_records - start);
            gather_rows(ds, order, start, bs, xb, yl, yp);

            double last_l_d = 0.0;

            if (flags.use_gan_discriminator) {
                for (int s = 0; s < hp.steps_per_side; ++s) {
                    const auto& fake = gen.net.forward(xb, bs, /*train=*/false);
                    d_concat.resize(fake.size() + xb.size());
                    std::copy(fake.begin(), fake.end(), d_concat.begin());
                    std::copy(xb.begin(), xb.end(), d_concat.begin() + fake.size());
                    const auto& d_out = disc->net.forward(d_concat, 2 * bs, /*train=*/true);

                    std::vector<double> d_fake(d_out.begin(), d_out.begin() + bs);
                    std::vector<double> d_real(d_out.begin() + bs, d_out.end());
                    last_l_d = discriminator_loss(d_fake, d_real);
                    check_finite(last_l_d, "discriminator loss");

                    std::vector<double> g_fake, g_real;
                    discriminator_step_grad(d_fake, d_real, g_fake, g_real);
                    std::vector<double> gy(2 * bs);
                    std::copy(g_fake.begin(), g_fake.end(), gy.begin());
                    std::copy(g_real.begin(), g_real.end(), gy.begin() + bs);
                    disc->net.backward(gy, 2 * bs);
                    adam_d.step(disc->net);
                }
            }

            for (int s = 0; s < hp.steps_per_side; ++s) {
                const auto& gen_out = gen.net.forward(xb, bs, /*train=*/true);
                gen_gy.assign(gen_out.size(), 0.0);

                double l_gan = 0.0, l_target = 0.0, l_sensitive = 0.0, l_hinge = 0.0;

                if (flags.use_gan_discriminator) {
                    const auto& d_out = disc->net.forward(gen_out, bs, /*train=*/false);
                    std::vector<double> d_fake(d_out.begin(), d_out.end());
                    l_gan = gan_generator_loss(d_fake);
                    // non-saturating step toward the same fixed point
                    gan_generator_loss_grad_nonsaturating(d_fake, gy_fake);
                    const auto& gx = disc->net.backward(gy_fake, bs);
                    for (std::size_t i = 0; i < gen_gy.size(); ++i) gen_gy[i] += gx[i];
                }

                if (flags.use_target_classifier) {
                    const auto& p_t = d_l.net.forward(gen_out, bs, /*train=*/false);
                    std::vector<double> gy_t;
                    l_target = nn::cross_entropy(p_t, yl, bs, kl, &gy_t);
                    for (auto& v : gy_t) v *= hp.alpha;
                    const auto& gx = d_l.net.backward(gy_t, bs);
                    for (std::size_t i = 0; i < gen_gy.size(); ++i) gen_gy[i] += gx[i];
                }

                {
                    const auto& p_s = d_p.net.forward(gen_out, bs, /*train=*/false);
                    std::vector<double> gy_s;
                    l_sensitive = nn::cross_entropy(p_s, yp, bs, kp, &gy_s);
                    double w = -hp.alpha * hp.lambda_tradeoff;
                    for (auto& v : gy_s) v *= w;
                    const auto& gx = d_p.net.backward(gy_s, bs);
                    for (std::size_t i = 0; i < gen_gy.size(); ++i) gen_gy[i] += gx[i];
                }

                {
                    std::vector<double> gh;
                    l_hinge = hinge_loss(gen_out, xb, bs, hp.hinge_cap, &gh);
                    for (std::size_t i = 0; i < gen_gy.size(); ++i)
                        gen_gy[i] += hp.beta_hinge * gh[i];
                }

                double l_adv = (flags.use_target_classifier ? l_target : 0.0) -
                               hp.lambda_tradeoff * l_sensitive;
                double l_g = generator_total_loss(l_gan, l_adv, l_hinge, hp.alpha, hp.beta_hinge);
                check_finite(l_g, "generator loss");

                gen.net.backward(gen_gy, bs);
                adam_g.step(gen.net);

                if (log) {
                    std::vector<double> row;
                    if (flags.use_gan_discriminator) {
                        row.push_back(last_l_d);
                        row.push_back(l_gan);
                    }
                    if (flags.use_target_classifier) row.push_back(l_target);
                    row.push_back(l_sensitive);
                    row.push_back(l_adv);
                    row.push_back(l_hinge);
                    row.push_back(l_g);
                    log->rows.push_back(std::move(row));
                }
            }
        }

        if (d_l.net.param_hash() != frozen_l || d_p.net.param_hash() != frozen_p)
            throw FrozenModelMutated("frozen classifier changed during adversarial training");
    }

    if (in.d_target->net.param_hash() != frozen_l || in.d_sensitive->net.param_hash() != frozen_p)
        throw FrozenModelMutated("caller's frozen classifier changed during adversarial training");

    GanResult result{GeneratorModel{std::move(gen), ds.kind}, std::move(disc)};
    return result;
}

GanResult train_ngp(const GanTrainingInputs& in, const HyperParams& hp, LossLog* log) {
    return train_prgan(in, hp, ngp_flags(), log);
}

GanResult train_ap(const GanTrainingInputs& in, const HyperParams& hp, LossLog* log) {
    return train_prgan(in, hp, ap_flags(), log);
}

PerturbedDataset perturb(GeneratorModel& generator, const core::LabeledDataset& dataset) {
    if (generator.model.net.input_dim() != dataset.dim)
        throw ShapeMismatch("perturb: feature dimensions do not match the generator");
    PerturbedDataset out;
    out.data = dataset;  // copies labels, kind, shape metadata
    const int chunk = 256;
    std::vector<double> xb;
    for (int start = 0; start < dataset.num_records; start += chunk) {
        int bs = std::min(chunk, dataset.num_records - start);
        xb.assign(dataset.features.begin() + static_cast<std::size_t>(start) * dataset.dim,
                  dataset.features.begin() + static_cast<std::size_t>(start + bs) * dataset.dim);
        const auto& y = generator.model.net.forward(xb, bs, /*train=*/false);
        for (std::size_t i = 0; i < y.size(); ++i) {
            double v = y[i];
            if (dataset.kind == core::DataKind::binary) v = v >= 0.5 ? 1.0 : 0.0;
            out.data.features[static_cast<std::size_t>(start) * dataset.dim + i] = v;
        }
    }
    out.provenance.generator_id = generator.id();
    out.provenance.source_hash = hash_hex(dataset.content_hash());
    return out;
}

void write_perturbed_sidecar(const PerturbedDataset& pd, const std::string& path) {
    nlohmann::json hp_j;
    to_json(hp_j, pd.provenance.hyperparams);
    nlohmann::json j = {{"generator_id", pd.provenance.generator_id},
                        {"hyperparams", hp_j},
                        {"source_hash", pd.provenance.source_hash}};
    write_text_file(path, j.dump(2) + "\n");
}

std::vector<TuneCandidate> tune_candidates(const GanTrainingInputs& in,
                                           const std::vector<HyperParams>& grid,
                                           TrainerFlags flags) {
    const auto& ds = *in.train;
    std::vector<int> all(ds.num_records);
    std::iota(all.begin(), all.end(), 0);
    std::uint64_t base_seed = grid.empty() ? 0 : grid.front().seed;
    core::SliceSplit split = core::stratified_split_4to1(ds, all, base_seed ^ 0x7a1eULL);
    core::LabeledDataset fit = ds.subset(split.train);
    core::LabeledDataset val = ds.subset(split.test);

    std::vector<TuneCandidate> out(grid.size());

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
        HyperParams hp = grid[i];
        hp.seed = hp.seed + static_cast<std::uint64_t>(i);
        GanTrainingInputs local = in;
        local.train = &fit;
        GanResult res = train_prgan(local, hp, flags, nullptr);
        PerturbedDataset pv = perturb(res.generator, val);

        auto dl = in.d_target->clone();
        auto dp = in.d_sensitive->clone();
        TuneCandidate cand;
        cand.hp = hp;
        cand.acc_target = models::accuracy(dl, pv.data.features, pv.data.target_labels);
        cand.acc_sensitive = models::accuracy(dp, pv.data.features, pv.data.sensitive_labels);
        cand.generator = std::move(res.generator);
        double norm_sum = 0.0;
        for (int r = 0; r < val.num_records; ++r) {
            double sq = 0.0;
            for (int j = 0; j < val.dim; ++j) {
                double d = pv.data.features[static_cast<std::size_t>(r) * val.dim + j] -
                           val.features[static_cast<std::size_t>(r) * val.dim + j];
                sq += d * d;
            }
            norm_sum += std::sqrt(sq);
        }
        cand.mean_norm = norm_sum / std::max(val.num_records, 1);
        out[i] = std::move(cand);
    }
    return out;
}

int select_candidate(const std::vector<TuneCandidate>& candidates, TuneMode mode, double value) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
        const auto& c = candidates[i];
        bool feasible = mode == TuneMode::threshold ? c.acc_target >= value
                                                    : c.acc_sensitive <= value;
        if (!feasible) continue;
        if (best < 0) { best = i; continue; }
        const auto& b = candidates[best];
        if (mode == TuneMode::threshold) {
            if (c.acc_sensitive < b.acc_sensitive ||
                (c.acc_sensitive == b.acc_sensitive && c.mean_norm < b.mean_norm))
                best = i;
        } else {
            if (c.acc_target > b.acc_target ||
                (c.acc_target == b.acc_target && c.mean_norm < b.mean_norm))
                best = i;
        }
    }
    return best;
}

TuneResult tune(const GanTrainingInputs& in, const std::vector<HyperParams>& grid,
                TuneMode mode, double value, TrainerFlags flags) {
    TuneResult result;
    result.candidates = tune_candidates(in, grid, flags);
    for (auto& c : result.candidates)
        c.feasible = mode == TuneMode::threshold ? c.acc_target >= value
                                                 : c.acc_sensitive <= value;
    result.best_index = select_candidate(result.candidates, mode, value);
    if (result.best_index < 0)
        throw NoFeasibleCandidate("tune: no candidate satisfies the constraint");
    return result;
}

}  // namespace prgan::gan
