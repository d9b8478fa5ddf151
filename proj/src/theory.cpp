#include "prgan/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <nlohmann/json.hpp>

#include "prgan/errors.hpp"

namespace prgan::theory {

void DiscreteJointDistribution::validate() const {
    std::size_t n = points.size();
    if (masses.size() != n || dp_labels.size() != n || dl_labels.size() != n)
        throw SupportMismatch("instance arrays have different lengths");
    double total = 0.0;
    for (double m : masses) {
        if (m < 0 || !std::isfinite(m)) throw OutOfRange("negative or non-finite mass");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw OutOfRange("masses sum to " + std::to_string(total) + ", expected 1");
    for (std::size_t i = 0; i < n; ++i)
        if ((dp_labels[i] & ~1) || (dl_labels[i] & ~1))
            throw OutOfRange("labels must be binary");
}

void to_json(nlohmann::json& j, const DiscreteJointDistribution& d) {
    j = {{"points", d.points},
         {"masses", d.masses},
         {"dp_labels", d.dp_labels},
         {"dl_labels", d.dl_labels}};
}

void from_json(const nlohmann::json& j, DiscreteJointDistribution& d) {
    d.points = j.at("points").get<std::vector<std::string>>();
    d.masses = j.at("masses").get<std::vector<double>>();
    d.dp_labels = j.at("dp_labels").get<std::vector<int>>();
    d.dl_labels = j.at("dl_labels").get<std::vector<int>>();
}

DiscreteJointDistribution load_instance(const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    DiscreteJointDistribution d;
    from_json(j, d);
    d.validate();
    return d;
}

void save_instance(const DiscreteJointDistribution& d, const std::string& path) {
    nlohmann::json j;
    to_json(j, d);
    write_text_file(path, j.dump(2) + "\n");
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw SupportMismatch("tv_distance: different support sizes");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return acc / 2.0;
}

double tv_distance(const DiscreteJointDistribution& p, const DiscreteJointDistribution& q) {
    if (p.points != q.points) throw SupportMismatch("tv_distance: different supports");
    return tv_distance(p.masses, q.masses);
}

double tv_distance_subset_max(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw SupportMismatch("tv_distance: different support sizes");
    int n = static_cast<int>(p.size());
    if (n > 22) throw OutOfRange("subset enumeration limited to 22 points");
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double dp = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) dp += p[i] - q[i];
        best = std::max(best, std::abs(dp));
    }
    return best;
}

CellMasses cell_masses(const DiscreteJointDistribution& d) {
    d.validate();
    CellMasses c;
    for (int i = 0; i < d.size(); ++i) {
        double m = d.masses[i];
        if (d.dp_labels[i] == 1)
            (d.dl_labels[i] == 1 ? c.x11 : c.x10) += m;
        else
            (d.dl_labels[i] == 1 ? c.x01 : c.x00) += m;
    }
    return c;
}

bool is_balanced(const DiscreteJointDistribution& d, double tol) {
    CellMasses c = cell_masses(d);
    return std::abs(c.x11 - c.x01) <= tol && std::abs(c.x10 - c.x00) <= tol;
}

FlippingMap construct_flipping_map(const DiscreteJointDistribution& d) {
    if (!is_balanced(d)) throw NotBalanced("flipping map requires balanced cell masses");
    FlippingMap map;
    for (int col = 0; col < 2; ++col) {
        std::vector<int> upper, lower;  // dp == 1 and dp == 0 within this target column
        for (int i = 0; i < d.size(); ++i) {
            if (d.dl_labels[i] != col || d.masses[i] <= 0.0) continue;
            (d.dp_labels[i] == 1 ? upper : lower).push_back(i);
        }
        // equal-mass greedy coupling in both directions
        for (int dir = 0; dir < 2; ++dir) {
            const auto& from = dir == 0 ? upper : lower;
            const auto& to = dir == 0 ? lower : upper;
            std::size_t ti = 0;
            double t_left = to.empty() ? 0.0 : d.masses[to[0]];
            for (int f : from) {
                double f_left = d.masses[f];
                while (f_left > 1e-15 && ti < to.size()) {
                    double take = std::min(f_left, t_left);
                    map.edges.push_back({f, to[ti], take});
                    f_left -= take;
                    t_left -= take;
                    if (t_left <= 1e-15 && ti + 1 <= to.size()) {
                        ++ti;
                        t_left = ti < to.size() ? d.masses[to[ti]] : 0.0;
                    }
                }
            }
        }
    }
    return map;
}

std::vector<double> FlippingMap::pushforward(const DiscreteJointDistribution& d) const {
    std::vector<double> out(d.size(), 0.0);
    for (const auto& e : edges) out[e.to] += e.mass;
    return out;
}

FlipMapCheck verify_flipping_map(const DiscreteJointDistribution& d, const FlippingMap& map,
                                 double tol) {
    FlipMapCheck check;
    check.flips_all = true;
    check.preserves_all = true;
    std::vector<double> outgoing(d.size(), 0.0);
    for (const auto& e : map.edges) {
        if (d.dp_labels[e.to] != 1 - d.dp_labels[e.from]) check.flips_all = false;
        if (d.dl_labels[e.to] != d.dl_labels[e.from]) check.preserves_all = false;
        outgoing[e.from] += e.mass;
    }
    auto push = map.pushforward(d);
    check.marginals_ok = true;
    for (int i = 0; i < d.size(); ++i) {
        if (std::abs(outgoing[i] - d.masses[i]) > tol) check.marginals_ok = false;
        if (std::abs(push[i] - d.masses[i]) > tol) check.marginals_ok = false;
    }
    return check;
}

namespace {

// Edmonds-Karp on a tiny dense graph with double capacities.
double max_flow(std::vector<std::vector<double>>& cap, int s, int t) {
    int n = static_cast<int>(cap.size());
    double flow = 0.0;
    while (true) {
        std::vector<int> parent(n, -1);
        parent[s] = s;
        std::queue<int> q;
        q.push(s);
        while (!q.empty() && parent[t] < 0) {
            int u = q.front();
            q.pop();
            for (int v = 0; v < n; ++v)
                if (parent[v] < 0 && cap[u][v] > 1e-13) {
                    parent[v] = u;
                    q.push(v);
                }
        }
        if (parent[t] < 0) break;
        double push = std::numeric_limits<double>::infinity();
        for (int v = t; v != s; v = parent[v]) push = std::min(push, cap[parent[v]][v]);
        for (int v = t; v != s; v = parent[v]) {
            cap[parent[v]][v] -= push;
            cap[v][parent[v]] += push;
        }
        flow += push;
    }
    return flow;
}

}  // namespace

bool flipping_plan_exists(const DiscreteJointDistribution& d, double tol) {
    d.validate();
    int n = d.size();
    // bipartite transport feasibility: source -> senders -> receivers -> sink
    std::vector<std::vector<double>> cap2(2 * n + 2, std::vector<double>(2 * n + 2, 0.0));
    int s2 = 2 * n, t2 = 2 * n + 1;
    for (int i = 0; i < n; ++i) {
        cap2[s2][i] = d.masses[i];
        cap2[n + i][t2] = d.masses[i];
        for (int j = 0; j < n; ++j)
            if (d.dp_labels[j] == 1 - d.dp_labels[i] && d.dl_labels[j] == d.dl_labels[i])
                cap2[i][n + j] = 2.0;  // effectively unbounded
    }
    double flow = max_flow(cap2, s2, t2);
    return std::abs(flow - 1.0) <= tol;
}

std::vector<double> optimal_discriminator(const std::vector<double>& p_data,
                                          const std::vector<double>& p_g) {
    if (p_data.size() != p_g.size()) throw SupportMismatch("optimal_discriminator: support sizes differ");
    std::vector<double> out(p_data.size(), std::numeric_limits<double>::quiet_NaN());
    bool any = false;
    for (std::size_t i = 0; i < p_data.size(); ++i) {
        double denom = p_data[i] + p_g[i];
        if (denom > 0) {
            out[i] = p_data[i] / denom;
            any = true;
        }
    }
    if (!any) throw EmptyJointSupport("optimal_discriminator: no point carries mass");
    return out;
}

namespace {

// Discrete generator objective for a transport plan: realness term under the
// plan's own optimal discriminator plus error/flip terms at unit weights.
double plan_objective(const DiscreteJointDistribution& d, const std::vector<double>& push,
                      double target_err_mass, double sensitive_flip_mass) {
    double realness = 0.0;
    for (std::size_t i = 0; i < push.size(); ++i) {
        if (push[i] <= 0) continue;
        double one_minus_dstar = push[i] / (d.masses[i] + push[i]);
        realness += push[i] * std::log(std::max(one_minus_dstar, 1e-300));
    }
    return realness + (target_err_mass - sensitive_flip_mass);
}

}  // namespace

Theorem1Report verify_theorem1(const DiscreteJointDistribution& d, int brute_limit) {
    FlippingMap map = construct_flipping_map(d);
    Theorem1Report report;

    auto push = map.pushforward(d);
    report.tv = tv_distance(push, d.masses);

    double flip = 0.0, preserve = 0.0, total = 0.0;
    for (const auto& e : map.edges) {
        total += e.mass;
        if (d.dp_labels[e.to] != d.dp_labels[e.from]) flip += e.mass;
        if (d.dl_labels[e.to] == d.dl_labels[e.from]) preserve += e.mass;
    }
    report.flip_rate = total > 0 ? flip / total : 0.0;
    report.preserve_rate = total > 0 ? preserve / total : 0.0;

    double target_err = 0.0, sens_flip = 0.0;
    for (const auto& e : map.edges) {
        if (d.dl_labels[e.to] != d.dl_labels[e.from]) target_err += e.mass;
        if (d.dp_labels[e.to] != d.dp_labels[e.from]) sens_flip += e.mass;
    }
    report.objective = plan_objective(d, push, target_err, sens_flip);

    int n = d.size();
    if (n <= brute_limit) {
        report.brute_force_checked = true;
        report.brute_force_optimal = true;
        std::vector<int> h(n, 0);
        std::vector<double> hpush(n);
        while (true) {
            std::fill(hpush.begin(), hpush.end(), 0.0);
            double terr = 0.0, sflip = 0.0;
            for (int i = 0; i < n; ++i) {
                if (d.masses[i] <= 0) continue;
                hpush[h[i]] += d.masses[i];
                if (d.dl_labels[h[i]] != d.dl_labels[i]) terr += d.masses[i];
                if (d.dp_labels[h[i]] != d.dp_labels[i]) sflip += d.masses[i];
            }
            double obj = plan_objective(d, hpush, terr, sflip);
            if (obj < report.objective - 1e-9) {
                report.brute_force_optimal = false;
                break;
            }
            int k = 0;
            while (k < n && ++h[k] == n) h[k++] = 0;
            if (k == n) break;
        }
    }
    return report;
}

bool exists_perfect_point_map(const DiscreteJointDistribution& d, double tol) {
    int n = d.size();
    if (n > 7) throw OutOfRange("point map enumeration limited to 7 points");
    std::vector<int> h(n, 0);
    std::vector<double> push(n);
    while (true) {
        std::fill(push.begin(), push.end(), 0.0);
        bool flips = true;
        for (int i = 0; i < n; ++i) {
            if (d.masses[i] <= 0) continue;
            push[h[i]] += d.masses[i];
            if (d.dp_labels[h[i]] != 1 - d.dp_labels[i]) flips = false;
        }
        if (flips && tv_distance(push, d.masses) <= tol) return true;
        int k = 0;
        while (k < n && ++h[k] == n) h[k++] = 0;
        if (k == n) break;
    }
    return false;
}

Theorem2Result check_theorem2(const std::vector<int>& f, const std::vector<int>& g,
                              const std::vector<int>& G, const DiscreteJointDistribution& d,
                              double beta_tv) {
    d.validate();
    std::size_t n = d.points.size();
    if (f.size() != n || g.size() != n || G.size() != n)
        throw SupportMismatch("check_theorem2: classifier/map sizes differ from the domain");
    for (int m : G)
        if (m < 0 || m >= static_cast<int>(n)) throw OutOfRange("check_theorem2: map out of range");

    Theorem2Result r;
    double err_f = 0.0, err_g = 0.0, g_changed = 0.0, f_changed = 0.0, fg_diff_pushed = 0.0;
    std::vector<double> push(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double m = d.masses[i];
        if (f[i] != d.dp_labels[i]) err_f += m;
        if (g[i] != d.dp_labels[i]) err_g += m;
        if (g[G[i]] != g[i]) g_changed += m;
        if (f[G[i]] != f[i]) f_changed += m;
        if (f[G[i]] != g[G[i]]) fg_diff_pushed += m;
        push[G[i]] += m;
    }
    r.eps = std::max(err_f, err_g);
    double actual_tv = tv_distance(push, d.masses);
    if (beta_tv + 1e-12 < actual_tv)
        throw AccuracyPreconditionUnmet("beta_tv below the actual total variation distance");
    r.beta = beta_tv;
    r.delta = 1.0 - g_changed;
    r.lhs = f_changed;
    r.rhs = 1.0 - r.delta - 4.0 * r.eps - r.beta;
    r.holds = r.lhs >= r.rhs - 1e-12;
    r.intermediate_lhs = fg_diff_pushed;
    r.intermediate_rhs = 2.0 * r.eps + r.beta;
    r.intermediate_holds = r.intermediate_lhs <= r.intermediate_rhs + 1e-12;
    return r;
}

}  // namespace prgan::theory
