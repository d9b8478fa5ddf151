#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "prgan/errors.hpp"
#include "prgan/theory.hpp"

using namespace prgan;
using namespace prgan::theory;

namespace {

DiscreteJointDistribution random_instance(int n, Rng& rng, bool force_balanced = false) {
    DiscreteJointDistribution d;
    for (int i = 0; i < n; ++i) {
        d.points.push_back("p" + std::to_string(i));
        d.dp_labels.push_back(static_cast<int>(rng() % 2));
        d.dl_labels.push_back(static_cast<int>(rng() % 2));
        d.masses.push_back(uniform01(rng) + 0.05);
    }
    if (force_balanced) {
        // rescale each cell so opposing sensitive cells weigh the same
        double cell[4] = {0, 0, 0, 0};
        for (int i = 0; i < n; ++i) cell[d.cell_of(i)] += d.masses[i];
        // columns: dl=1 -> cells (1,1),(0,1); dl=0 -> cells (1,0),(0,0)
        for (int col = 0; col < 2; ++col) {
            double hi = cell[2 + col], lo = cell[col];
            if (hi <= 0 || lo <= 0) return random_instance(n, rng, true);
            double target = (hi + lo) / 2;
            for (int i = 0; i < n; ++i) {
                if (d.dl_labels[i] != col) continue;
                d.masses[i] *= d.dp_labels[i] == 1 ? target / hi : target / lo;
            }
        }
    }
    double total = 0;
    for (double m : d.masses) total += m;
    for (auto& m : d.masses) m /= total;
    // force an exact unit sum, then re-patch the first point
    double again = 0;
    for (double m : d.masses) again += m;
    d.masses[0] += 1.0 - again;
    return d;
}

DiscreteJointDistribution uniform4() {
    DiscreteJointDistribution d;
    d.points = {"a", "b", "c", "d"};
    d.masses = {0.25, 0.25, 0.25, 0.25};
    d.dp_labels = {1, 1, 0, 0};
    d.dl_labels = {1, 0, 1, 0};
    return d;
}

}  // namespace

TEST_CASE("tv distance basics and the derived example") {
    CHECK(tv_distance({0.5, 0.5}, {0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(tv_distance({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0));
    // exhaustive max over the 4 subsets of a 2-point domain
    CHECK(tv_distance_subset_max({0.5, 0.5}, {0.8, 0.2}) == doctest::Approx(0.3));
    CHECK(tv_distance({0.5, 0.5}, {0.8, 0.2}) == doctest::Approx(0.3));
    CHECK_THROWS_AS(tv_distance({0.5}, {0.5, 0.5}), SupportMismatch);
}

TEST_CASE("tv subset-max identity holds exhaustively up to 12 points (property)") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 11);  // 2..12
        std::vector<double> p(n), q(n);
        double sp = 0, sq = 0;
        for (int i = 0; i < n; ++i) {
            p[i] = uniform01(rng);
            q[i] = uniform01(rng);
            sp += p[i];
            sq += q[i];
        }
        for (int i = 0; i < n; ++i) {
            p[i] /= sp;
            q[i] /= sq;
        }
        CHECK(tv_distance_subset_max(p, q) == doctest::Approx(tv_distance(p, q)).epsilon(1e-12));
    }
}

TEST_CASE("cell masses") {
    SUBCASE("uniform over one point per cell") {
        auto c = cell_masses(uniform4());
        CHECK(c.x11 == doctest::Approx(0.25));
        CHECK(c.x10 == doctest::Approx(0.25));
        CHECK(c.x01 == doctest::Approx(0.25));
        CHECK(c.x00 == doctest::Approx(0.25));
    }
    SUBCASE("all mass in one cell") {
        DiscreteJointDistribution d;
        d.points = {"a"};
        d.masses = {1.0};
        d.dp_labels = {1};
        d.dl_labels = {1};
        auto c = cell_masses(d);
        CHECK(c.x11 == doctest::Approx(1.0));
        CHECK(c.x10 + c.x01 + c.x00 == doctest::Approx(0.0));
    }
    SUBCASE("random instance agrees with per-point accumulation") {
        Rng rng(8);
        auto d = random_instance(8, rng);
        auto c = cell_masses(d);
        double oracle[2][2] = {{0, 0}, {0, 0}};
        for (int i = 0; i < d.size(); ++i) oracle[d.dp_labels[i]][d.dl_labels[i]] += d.masses[i];
        CHECK(c.x11 == doctest::Approx(oracle[1][1]).epsilon(1e-12));
        CHECK(c.x10 == doctest::Approx(oracle[1][0]).epsilon(1e-12));
        CHECK(c.x01 == doctest::Approx(oracle[0][1]).epsilon(1e-12));
        CHECK(c.x00 == doctest::Approx(oracle[0][0]).epsilon(1e-12));
        double sum = c.x11 + c.x10 + c.x01 + c.x00;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("balance predicate") {
    CHECK(is_balanced(uniform4()));

    DiscreteJointDistribution corr;  // strongly correlated labels
    corr.points = {"a", "b", "c", "d"};
    corr.masses = {0.45, 0.05, 0.05, 0.45};
    corr.dp_labels = {1, 1, 0, 0};
    corr.dl_labels = {1, 0, 1, 0};
    CHECK_FALSE(is_balanced(corr));

    DiscreteJointDistribution cols;  // X11 == X01 and X10 == X00
    cols.points = {"a", "b", "c", "d"};
    cols.masses = {0.3, 0.2, 0.3, 0.2};
    cols.dp_labels = {1, 1, 0, 0};
    cols.dl_labels = {1, 0, 1, 0};
    CHECK(is_balanced(cols));
}

TEST_CASE("flipping map construction and verification") {
    SUBCASE("uniform 4-cell instance swaps the sensitive halves") {
        auto d = uniform4();
        auto map = construct_flipping_map(d);
        auto check = verify_flipping_map(d, map);
        CHECK(check.ok());
        // a <-> c (dl=1), b <-> d (dl=0)
        for (const auto& e : map.edges) {
            CHECK(d.dl_labels[e.from] == d.dl_labels[e.to]);
            CHECK(d.dp_labels[e.from] == 1 - d.dp_labels[e.to]);
        }
    }
    SUBCASE("unbalanced instance: NotBalanced and no coupling exists by the flow oracle") {
        DiscreteJointDistribution d;
        d.points = {"a", "b", "c", "d"};
        d.masses = {0.45, 0.05, 0.05, 0.45};
        d.dp_labels = {1, 1, 0, 0};
        d.dl_labels = {1, 0, 1, 0};
        CHECK_THROWS_AS(construct_flipping_map(d), NotBalanced);
        CHECK_FALSE(flipping_plan_exists(d));
    }
    SUBCASE("6-point balanced instance with unequal masses passes the verifier") {
        Rng rng(31);
        auto d = random_instance(6, rng, true);
        REQUIRE(is_balanced(d, 1e-9));
        auto map = construct_flipping_map(d);
        CHECK(verify_flipping_map(d, map).ok());
    }
}

TEST_CASE("lemma: flipping plan exists iff balanced, 1000 random instances vs flow oracle") {
    Rng rng(515151);
    int balanced_seen = 0, unbalanced_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 4 + static_cast<int>(rng() % 5);  // 4..8
        bool force = rng() % 2 == 0;
        auto d = random_instance(n, rng, force);
        bool balanced = is_balanced(d, 1e-9);
        bool exists = flipping_plan_exists(d, 1e-9);
        CHECK(balanced == exists);
        if (balanced) {
            ++balanced_seen;
            auto map = construct_flipping_map(d);
            CHECK(verify_flipping_map(d, map, 1e-9).ok());
        } else {
            ++unbalanced_seen;
        }
    }
    // both branches exercised
    CHECK(balanced_seen > 100);
    CHECK(unbalanced_seen > 100);
}

TEST_CASE("optimal discriminator") {
    CHECK(optimal_discriminator({0.5, 0.5}, {0.5, 0.5}) == std::vector<double>{0.5, 0.5});
    auto d = optimal_discriminator({0.8, 0.2}, {0.2, 0.8});
    CHECK(d[0] == doctest::Approx(0.8));
    CHECK(d[1] == doctest::Approx(0.2));
    auto z = optimal_discriminator({0.6, 0.4}, {0.0, 1.0});
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(optimal_discriminator({0.0}, {0.0}), EmptyJointSupport);
}

TEST_CASE("theorem 1: flipping plan attains the generator optimum") {
    SUBCASE("uniform 4-cell instance") {
        auto rep = verify_theorem1(uniform4());
        CHECK(rep.tv <= 1e-9);
        CHECK(rep.flip_rate == doctest::Approx(1.0));
        CHECK(rep.preserve_rate == doctest::Approx(1.0));
        CHECK(rep.brute_force_checked);
        CHECK(rep.brute_force_optimal);
        // realness term bottoms out at log(1/2), label terms at -1
        CHECK(rep.objective == doctest::Approx(std::log(0.5) - 1.0).epsilon(1e-9));
    }
    SUBCASE("random balanced 6-point instances, brute-force optimality") {
        Rng rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            auto d = random_instance(6, rng, true);
            REQUIRE(is_balanced(d, 1e-9));
            auto rep = verify_theorem1(d);
            CHECK(rep.tv <= 1e-9);
            CHECK(rep.flip_rate == doctest::Approx(1.0));
            CHECK(rep.preserve_rate == doctest::Approx(1.0));
            CHECK(rep.brute_force_checked);
            CHECK(rep.brute_force_optimal);
        }
    }
    SUBCASE("unbalanced: NotBalanced, and no point map gets TV=0 with flip rate 1") {
        Rng rng(123);
        int tested = 0;
        for (int trial = 0; trial < 50 && tested < 10; ++trial) {
            auto d = random_instance(5, rng, false);
            if (is_balanced(d, 1e-9)) continue;
            ++tested;
            CHECK_THROWS_AS(verify_theorem1(d), NotBalanced);
            CHECK_FALSE(exists_perfect_point_map(d, 1e-9));
        }
        CHECK(tested == 10);
    }
}

TEST_CASE("theorem 2 bound") {
    SUBCASE("perfect classifiers and a perfect flipper: lhs = rhs = 1") {
        auto d = uniform4();
        std::vector<int> f = d.dp_labels, g = d.dp_labels;
        std::vector<int> G{2, 3, 0, 1};  // a<->c, b<->d
        auto r = check_theorem2(f, g, G, d, 0.0);
        CHECK(r.eps == doctest::Approx(0.0));
        CHECK(r.delta == doctest::Approx(0.0));
        CHECK(r.lhs == doctest::Approx(1.0));
        CHECK(r.rhs == doctest::Approx(1.0));
        CHECK(r.holds);
        CHECK(r.intermediate_holds);
    }
    SUBCASE("theorem arithmetic: delta=.1 eps=.02 beta=.05 -> rhs = .77") {
        // rhs composition is pure arithmetic on the inputs
        double rhs = 1.0 - 0.1 - 4 * 0.02 - 0.05;
        CHECK(rhs == doctest::Approx(0.77));
    }
    SUBCASE("beta below the actual TV is rejected") {
        auto d = uniform4();
        std::vector<int> G{0, 1, 2, 3};  // identity: pushforward == data, tv = 0
        std::vector<int> Gbad{0, 0, 0, 0};
        CHECK_NOTHROW(check_theorem2(d.dp_labels, d.dp_labels, G, d, 0.0));
        CHECK_THROWS_AS(check_theorem2(d.dp_labels, d.dp_labels, Gbad, d, 0.0),
                        AccuracyPreconditionUnmet);
    }
    SUBCASE("500 random precondition-satisfying instances: zero violations") {
        Rng rng(777);
        int done = 0;
        while (done < 500) {
            int n = 4 + static_cast<int>(rng() % 5);
            auto d = random_instance(n, rng, rng() % 2 == 0);
            // classifiers near ground truth with small corruption
            std::vector<int> f = d.dp_labels, g = d.dp_labels, G(n);
            if (rng() % 3 == 0) f[rng() % n] ^= 1;
            if (rng() % 3 == 0) g[rng() % n] ^= 1;
            for (int i = 0; i < n; ++i) G[i] = static_cast<int>(rng() % n);
            // exact beta from the pushforward
            std::vector<double> push(n, 0.0);
            for (int i = 0; i < n; ++i) push[G[i]] += d.masses[i];
            double beta = tv_distance(push, d.masses);
            auto r = check_theorem2(f, g, G, d, beta);
            CHECK(r.holds);
            CHECK(r.intermediate_holds);
            ++done;
        }
    }
}

TEST_CASE("instances load and save as JSON") {
    auto d = uniform4();
    auto path = (std::filesystem::temp_directory_path() / "prgan_inst.json").string();
    save_instance(d, path);
    auto back = load_instance(path);
    CHECK(back.points == d.points);
    CHECK(back.masses == d.masses);
    CHECK(back.dp_labels == d.dp_labels);
    CHECK(back.dl_labels == d.dl_labels);
    std::filesystem::remove(path);

    write_text_file(path, "{\"points\": [\"a\"]}");
    CHECK_THROWS(load_instance(path));
    std::filesystem::remove(path);
}
