#ifndef PRGAN_THEORY_HPP
#define PRGAN_THEORY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prgan/util.hpp"

namespace prgan::theory {

// Finite domain with a probability mass and two binary labels per point.
// dp_labels plays the sensitive classifier, dl_labels the target classifier.
struct DiscreteJointDistribution {
    std::vector<std::string> points;
    std::vector<double> masses;
    std::vector<int> dp_labels;
    std::vector<int> dl_labels;

    int size() const { return static_cast<int>(points.size()); }
    void validate() const;
    int cell_of(int i) const { return dp_labels[i] * 2 + dl_labels[i]; }
};

void to_json(nlohmann::json& j, const DiscreteJointDistribution& d);
void from_json(const nlohmann::json& j, DiscreteJointDistribution& d);
DiscreteJointDistribution load_instance(const std::string& path);
void save_instance(const DiscreteJointDistribution& d, const std::string& path);

// max_C |P(C) - Q(C)| over a shared support; equals half the L1 distance.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);
double tv_distance(const DiscreteJointDistribution& p, const DiscreteJointDistribution& q);
// Exhaustive subset maximum, usable up to |support| <= 22 or so; the
// independent route for the identity check.
double tv_distance_subset_max(const std::vector<double>& p, const std::vector<double>& q);

// Masses of X_11, X_10, X_01, X_00 where the first index is the sensitive
// label and the second the target label.
struct CellMasses {
    double x11 = 0, x10 = 0, x01 = 0, x00 = 0;
    double of(int dp, int dl) const {
        return dp == 1 ? (dl == 1 ? x11 : x10) : (dl == 1 ? x01 : x00);
    }
};
CellMasses cell_masses(const DiscreteJointDistribution& d);

// mass(X_ij) == mass(X_{1-i,j}) for both columns, within 1e-9.
bool is_balanced(const DiscreteJointDistribution& d, double tol = 1e-9);

// Mass-preserving transport plan where every edge flips the sensitive label
// and keeps the target label. entries: (from, to, mass).
struct FlippingMap {
    struct Edge {
        int from, to;
        double mass;
    };
    std::vector<Edge> edges;

    // pushforward of the source distribution through the plan
    std::vector<double> pushforward(const DiscreteJointDistribution& d) const;
};

// Pairs points column by column (equal-mass greedy coupling); requires
// is_balanced. The verifier below re-checks both defining properties.
FlippingMap construct_flipping_map(const DiscreteJointDistribution& d);

struct FlipMapCheck {
    bool flips_all = false;      // every edge lands in the opposite sensitive cell
    bool preserves_all = false;  // every edge keeps the target label
    bool marginals_ok = false;   // source marginals match masses, pushforward == masses
    bool ok() const { return flips_all && preserves_all && marginals_ok; }
};
FlipMapCheck verify_flipping_map(const DiscreteJointDistribution& d, const FlippingMap& map,
                                 double tol = 1e-9);

// Independent existence oracle: max-flow feasibility of the label-flipping
// transport problem, no balance condition consulted.
bool flipping_plan_exists(const DiscreteJointDistribution& d, double tol = 1e-9);

// D*(x) = P_data(x) / (P_data(x) + P_g(x)) on the shared support.
std::vector<double> optimal_discriminator(const std::vector<double>& p_data,
                                          const std::vector<double>& p_g);

struct Theorem1Report {
    double tv = 0.0;             // TV(P_g, P_data) under the flipping plan
    double flip_rate = 0.0;      // mass fraction with flipped sensitive label
    double preserve_rate = 0.0;  // mass fraction with preserved target label
    double objective = 0.0;      // discrete generator objective of the plan
    bool brute_force_checked = false;
    bool brute_force_optimal = false;  // no point map scores strictly lower
};

// Applies the constructed flipping plan as the generator over the domain and
// checks the three optimality assertions; for |domain| <= brute_limit also
// enumerates every point map to confirm none beats the plan's objective.
Theorem1Report verify_theorem1(const DiscreteJointDistribution& d, int brute_limit = 6);

// Exhaustive search over point maps: does any achieve TV == 0 and flip rate 1
// simultaneously? Used to document the unbalanced trade-off.
bool exists_perfect_point_map(const DiscreteJointDistribution& d, double tol = 1e-9);

struct Theorem2Result {
    double lhs = 0.0;       // Pr[f(x) != f(G(x))]
    double rhs = 0.0;       // 1 - delta - 4 eps - beta
    double delta = 0.0;     // 1 - Pr[g(x) != g(G(x))]
    double eps = 0.0;       // max classifier error against ground truth
    double beta = 0.0;      // TV bound used
    double intermediate_lhs = 0.0;  // Pr[f(G(x)) != g(G(x))]
    double intermediate_rhs = 0.0;  // 2 eps + beta
    bool holds = false;
    bool intermediate_holds = false;
};

// f and g are per-point binary classifiers for the sensitive task; the
// distribution's dp_labels act as ground truth. G is a point map. beta_tv
// must be at least the exact TV between the data and pushforward
// distributions (AccuracyPreconditionUnmet otherwise, likewise when a
// classifier's error exceeds eps_bound if given).
Theorem2Result check_theorem2(const std::vector<int>& f, const std::vector<int>& g,
                              const std::vector<int>& G, const DiscreteJointDistribution& d,
                              double beta_tv);

}  // namespace prgan::theory

#endif
