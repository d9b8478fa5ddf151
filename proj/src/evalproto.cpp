#include "prgan/evalproto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"

namespace prgan::eval {

double utility_drop(double acc_m, double acc_mprime) {
    return std::max(acc_m - acc_mprime, 0.0);
}

double privacy_drop(double acc_m, double acc_mprime, double acc_rc) {
    return std::max(acc_mprime - std::max(acc_m, acc_rc), 0.0);
}

const char* to_string(Method m) {
    switch (m) {
        case Method::PRGAN: return "PR-GAN";
        case Method::NGP: return "NGP";
        case Method::AP: return "AP";
        default: return "DP";
    }
}

Method method_from_string(const std::string& s) {
    if (s == "PR-GAN" || s == "prgan" || s == "PRGAN") return Method::PRGAN;
    if (s == "NGP" || s == "ngp") return Method::NGP;
    if (s == "AP" || s == "ap") return Method::AP;
    if (s == "DP" || s == "dp") return Method::DP;
    throw OutOfRange("unknown method: " + s);
}

gan::GanTrainingInputs Protocol::gan_inputs() const {
    gan::GanTrainingInputs in;
    in.train = &b_train;
    in.d_target = &d_target;
    in.d_sensitive = &d_sensitive;
    in.generator_spec = generator_spec;
    in.discriminator_spec = discriminator_spec;
    return in;
}

std::vector<gan::HyperParams> Protocol::seeded_grid(std::vector<gan::HyperParams> grid) const {
    for (auto& hp : grid) hp.seed = seed;
    return grid;
}

Protocol prepare_protocol(const core::LabeledDataset& ds, models::ArchFamily family,
                          std::uint64_t seed, const ClassifierTrainOptions& copts) {
    Protocol p;
    p.dataset = ds;
    p.family = family;
    p.seed = seed;
    p.plan = core::slice_dataset(ds, seed);
    p.a_train = ds.subset(p.plan.slice_a.train);
    p.a_test = ds.subset(p.plan.slice_a.test);
    p.b_train = ds.subset(p.plan.slice_b.train);
    p.c_train = ds.subset(p.plan.slice_c.train);
    p.c_test = ds.subset(p.plan.slice_c.test);

    p.generator_spec = models::build_generator(family);
    p.discriminator_spec = models::build_gan_discriminator(family);

    models::TrainConfig cfg;
    cfg.epochs = copts.epochs;
    cfg.batch = copts.batch;
    cfg.lr = copts.lr;
    cfg.slice_name = "A";

    cfg.seed = seed * 2 + 1;
    cfg.heldout = view_target(p.a_test);
    p.d_target = models::train_classifier(
        models::build_classifier(models::ArchId::M1, family, ds.num_target_classes),
        view_target(p.a_train), cfg);

    cfg.seed = seed * 2 + 2;
    cfg.heldout = view_sensitive(p.a_test);
    p.d_sensitive = models::train_classifier(
        models::build_classifier(models::ArchId::M1, family, ds.num_sensitive_classes),
        view_sensitive(p.a_train), cfg);

    // the validation subset tune() derives from the slice-B train part
    std::vector<int> all(p.b_train.num_records);
    std::iota(all.begin(), all.end(), 0);
    auto vsplit = core::stratified_split_4to1(p.b_train, all, seed ^ 0x7a1eULL);
    p.b_val = p.b_train.subset(vsplit.test);

    p.orig_acc_target_c = models::accuracy(p.d_target, p.c_test.features, p.c_test.target_labels);
    p.orig_acc_sensitive_c =
        models::accuracy(p.d_sensitive, p.c_test.features, p.c_test.sensitive_labels);
    p.orig_acc_target_val = models::accuracy(p.d_target, p.b_val.features, p.b_val.target_labels);
    p.orig_acc_sensitive_val =
        models::accuracy(p.d_sensitive, p.b_val.features, p.b_val.sensitive_labels);
    return p;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

gan::TrainerFlags flags_for(Method m) {
    switch (m) {
        case Method::NGP: return gan::ngp_flags();
        case Method::AP: return gan::ap_flags();
        default: return gan::prgan_flags();
    }
}

}  // namespace

std::string EvaluationReport::to_csv() const {
    std::ostringstream out;
    out << "method,feasible,acc_target,acc_sensitive,constraint,detail\n";
    for (const auto& r : rows)
        out << r.method << ',' << (r.feasible ? 1 : 0) << ',' << fmt(r.acc_target) << ','
            << fmt(r.acc_sensitive) << ',' << r.constraint << ',' << r.detail << '\n';
    return out.str();
}

void EvaluationReport::write_csv(const std::string& path) const {
    write_text_file(path, to_csv());
}

void EvaluationReport::write_json(const std::string& path) const {
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows)
        rows_j.push_back({{"method", r.method},
                          {"feasible", r.feasible},
                          {"acc_target", r.acc_target},
                          {"acc_sensitive", r.acc_sensitive},
                          {"constraint", r.constraint},
                          {"detail", r.detail}});
    nlohmann::json prov_j = nlohmann::json::object();
    for (const auto& [k, v] : provenance) prov_j[k] = v;
    nlohmann::json j = {{"dataset", dataset_name}, {"rows", rows_j}, {"provenance", prov_j}};
    write_text_file(path, j.dump(2) + "\n");
}

EvaluationReport run_performance_table(Protocol& p, const std::vector<Method>& methods,
                                       const PerformanceOptions& opts) {
    EvaluationReport report;
    report.dataset_name = to_string(p.family);
    char cbuf[32];
    std::snprintf(cbuf, sizeof(cbuf), "T=%.2f", opts.threshold);
    std::string constraint = cbuf;

    report.provenance.push_back({"dataset_hash", hash_hex(p.dataset.content_hash())});
    report.provenance.push_back({"split_seed", std::to_string(p.plan.seed)});
    report.provenance.push_back({"d_target_checkpoint", hash_hex(p.d_target.checkpoint_hash())});
    report.provenance.push_back({"d_sensitive_checkpoint", hash_hex(p.d_sensitive.checkpoint_hash())});

    for (Method m : methods) {
        ReportRow row;
        row.method = to_string(m);
        row.constraint = constraint;
        if (m == Method::DP) {
            try {
                auto sweep = baselines::dp_sweep(p.b_val, p.c_test, p.d_target, p.d_sensitive,
                                                 opts.threshold, p.seed, opts.dp_grid_points);
                row.acc_target = sweep.acc_target;
                row.acc_sensitive = sweep.acc_sensitive;
                char d[48];
                std::snprintf(d, sizeof(d), "epsilon=%.4f", sweep.chosen_epsilon);
                row.detail = d;
            } catch (const NoFeasibleEpsilon&) {
                row.feasible = false;
                row.detail = "no feasible epsilon";
            }
        } else {
            try {
                auto tr = gan::tune(p.gan_inputs(), p.seeded_grid(opts.grid),
                                    gan::TuneMode::threshold, opts.threshold, flags_for(m));
                auto& best = tr.candidates[tr.best_index];
                auto pc = gan::perturb(best.generator, p.c_test);
                auto dl = p.d_target.clone();
                auto dp = p.d_sensitive.clone();
                row.acc_target = models::accuracy(dl, pc.data.features, pc.data.target_labels);
                row.acc_sensitive =
                    models::accuracy(dp, pc.data.features, pc.data.sensitive_labels);
                char d[96];
                std::snprintf(d, sizeof(d), "lambda=%g;alpha=%g;beta=%g;c=%g",
                              best.hp.lambda_tradeoff, best.hp.alpha, best.hp.beta_hinge,
                              best.hp.hinge_cap);
                row.detail = d;
            } catch (const NoFeasibleCandidate&) {
                row.feasible = false;
                row.detail = "no feasible candidate";
            }
        }
        report.rows.push_back(row);
    }

    ReportRow orig;
    orig.method = "Original";
    orig.constraint = constraint;
    orig.acc_target = p.orig_acc_target_c;
    orig.acc_sensitive = p.orig_acc_sensitive_c;
    report.rows.push_back(orig);
    return report;
}

std::vector<TradeoffPoint> run_tradeoff_sweep(Protocol& p, const std::vector<Method>& methods,
                                              const std::vector<double>& budgets,
                                              const PerformanceOptions& opts) {
    std::vector<TradeoffPoint> out;

    struct Pool {
        Method method;
        std::vector<gan::TuneCandidate> candidates;  // GAN methods
        std::vector<baselines::DpSweepPoint> dp_points;
    };
    std::vector<Pool> pools;
    for (Method m : methods) {
        Pool pool;
        pool.method = m;
        if (m == Method::DP) {
            auto grid = baselines::epsilon_grid(opts.dp_grid_points);
            auto dl = p.d_target.clone();
            auto dp = p.d_sensitive.clone();
            for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
                auto pv = p.b_val.kind == core::DataKind::real_valued
                              ? baselines::laplace_perturb(
                                    p.b_val, baselines::DPParams::laplace_from_epsilon(grid[i]).laplace_scale,
                                    p.seed + i)
                              : baselines::randomized_response(
                                    p.b_val,
                                    baselines::DPParams::randomized_response_from_epsilon(grid[i]).rr_truth_prob,
                                    p.seed + i);
                baselines::DpSweepPoint pt;
                pt.epsilon = grid[i];
                pt.acc_target_val = models::accuracy(dl, pv.data.features, pv.data.target_labels);
                pt.acc_sensitive_val =
                    models::accuracy(dp, pv.data.features, pv.data.sensitive_labels);
                pool.dp_points.push_back(pt);
            }
        } else {
            pool.candidates =
                gan::tune_candidates(p.gan_inputs(), p.seeded_grid(opts.grid), flags_for(m));
        }
        pools.push_back(std::move(pool));
    }

    for (double budget : budgets) {
        for (auto& pool : pools) {
            TradeoffPoint pt;
            pt.method = to_string(pool.method);
            pt.budget = budget;
            if (pool.method == Method::DP) {
                int best = -1;
                for (int i = 0; i < static_cast<int>(pool.dp_points.size()); ++i) {
                    const auto& c = pool.dp_points[i];
                    if (p.orig_acc_target_val - c.acc_target_val > budget) continue;
                    if (best < 0 || c.acc_sensitive_val < pool.dp_points[best].acc_sensitive_val)
                        best = i;
                }
                if (best >= 0) {
                    double eps = pool.dp_points[best].epsilon;
                    auto pc = p.c_test.kind == core::DataKind::real_valued
                                  ? baselines::laplace_perturb(
                                        p.c_test, baselines::DPParams::laplace_from_epsilon(eps).laplace_scale,
                                        p.seed ^ 0xabcULL)
                                  : baselines::randomized_response(
                                        p.c_test,
                                        baselines::DPParams::randomized_response_from_epsilon(eps).rr_truth_prob,
                                        p.seed ^ 0xabcULL);
                    auto dl = p.d_target.clone();
                    auto dp = p.d_sensitive.clone();
                    pt.feasible = true;
                    pt.acc_target = models::accuracy(dl, pc.data.features, pc.data.target_labels);
                    pt.acc_sensitive =
                        models::accuracy(dp, pc.data.features, pc.data.sensitive_labels);
                }
            } else {
                int best = -1;
                for (int i = 0; i < static_cast<int>(pool.candidates.size()); ++i) {
                    const auto& c = pool.candidates[i];
                    if (p.orig_acc_target_val - c.acc_target > budget) continue;
                    if (best < 0 ||
                        c.acc_sensitive < pool.candidates[best].acc_sensitive ||
                        (c.acc_sensitive == pool.candidates[best].acc_sensitive &&
                         c.mean_norm < pool.candidates[best].mean_norm))
                        best = i;
                }
                if (best >= 0) {
                    auto pc = gan::perturb(pool.candidates[best].generator, p.c_test);
                    auto dl = p.d_target.clone();
                    auto dp = p.d_sensitive.clone();
                    pt.feasible = true;
                    pt.acc_target = models::accuracy(dl, pc.data.features, pc.data.target_labels);
                    pt.acc_sensitive =
                        models::accuracy(dp, pc.data.features, pc.data.sensitive_labels);
                }
            }
            if (pt.feasible) {
                pt.achieved_privacy = std::max(p.orig_acc_sensitive_c - pt.acc_sensitive, 0.0);
                pt.utility_drop_c = std::max(p.orig_acc_target_c - pt.acc_target, 0.0);
            }
            out.push_back(pt);
        }
    }
    return out;
}

TransferReport run_transferability(Protocol& p, const core::LabeledDataset& perturbed_c_test,
                                   const ClassifierTrainOptions& copts) {
    TransferReport report;
    report.random_classifier = 1.0 / p.dataset.num_sensitive_classes;

    auto eval_on_perturbed = [&](models::TrainedModel& target_model,
                                 models::TrainedModel& sensitive_model, const std::string& name) {
        TransferModelRow row;
        row.arch = name;
        row.acc_target = models::accuracy(target_model, perturbed_c_test.features,
                                          perturbed_c_test.target_labels);
        row.acc_sensitive = models::accuracy(sensitive_model, perturbed_c_test.features,
                                             perturbed_c_test.sensitive_labels);
        report.rows.push_back(row);
    };

    eval_on_perturbed(p.d_target, p.d_sensitive, "M1");

    models::TrainConfig cfg;
    cfg.epochs = copts.epochs;
    cfg.batch = copts.batch;
    cfg.lr = copts.lr;
    cfg.slice_name = "A";
    for (auto id : {models::ArchId::M2, models::ArchId::M3}) {
        cfg.seed = p.seed * 4 + (id == models::ArchId::M2 ? 1 : 2);
        cfg.heldout = view_target(p.a_test);
        auto mt = models::train_classifier(
            models::build_classifier(id, p.family, p.dataset.num_target_classes),
            view_target(p.a_train), cfg);
        cfg.seed = p.seed * 4 + (id == models::ArchId::M2 ? 3 : 0) + 3;
        cfg.heldout = view_sensitive(p.a_test);
        auto ms = models::train_classifier(
            models::build_classifier(id, p.family, p.dataset.num_sensitive_classes),
            view_sensitive(p.a_train), cfg);
        eval_on_perturbed(mt, ms, std::string(models::to_string(id)));
    }

    double ud = 0.0, pd = 0.0;
    for (int k = 1; k <= 2; ++k) {
        ud += utility_drop(report.rows[0].acc_target, report.rows[k].acc_target);
        pd += privacy_drop(report.rows[0].acc_sensitive, report.rows[k].acc_sensitive,
                           report.random_classifier);
    }
    report.avg_utility_drop = ud / 2.0;
    report.avg_privacy_drop = pd / 2.0;
    return report;
}

double run_training_utility(Protocol& p, const core::LabeledDataset& perturbed_train,
                            const core::LabeledDataset& original_test, models::ArchId arch,
                            const ClassifierTrainOptions& copts) {
    models::TrainConfig cfg;
    cfg.epochs = copts.epochs;
    cfg.batch = copts.batch;
    cfg.lr = copts.lr;
    cfg.seed = p.seed * 8 + 5;
    cfg.slice_name = "C-perturbed";
    auto model = models::train_classifier(
        models::build_classifier(arch, p.family, p.dataset.num_target_classes),
        view_target(perturbed_train), cfg);
    return models::accuracy(model, original_test.features, original_test.target_labels);
}

void write_tradeoff_csv(const std::vector<TradeoffPoint>& points, const std::string& path) {
    std::ostringstream out;
    out << "method,budget,feasible,achieved_privacy,utility_drop_c,acc_target,acc_sensitive\n";
    for (const auto& pt : points)
        out << pt.method << ',' << fmt(pt.budget) << ',' << (pt.feasible ? 1 : 0) << ','
            << fmt(pt.achieved_privacy) << ',' << fmt(pt.utility_drop_c) << ','
            << fmt(pt.acc_target) << ',' << fmt(pt.acc_sensitive) << '\n';
    write_text_file(path, out.str());
}

}  // namespace prgan::eval
