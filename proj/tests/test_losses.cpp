#include <doctest.h>

#include <cmath>

#include "prgan/losses.hpp"
#include "prgan/util.hpp"

using namespace prgan;
using namespace prgan::gan;

// Hand-computed values: log 0.5 + log 0.5 = -1.3862943611...,
// log 0.2 + log 0.1 = -3.9120230054..., log 0.1 = -2.3025850930...
TEST_CASE("discriminator loss values") {
    CHECK(discriminator_loss({0.5}, {0.5}) == doctest::Approx(-1.3862943611198906).epsilon(1e-9));
    CHECK(discriminator_loss({0.2}, {0.9}) == doctest::Approx(-3.912023005428146).epsilon(1e-9));
    // optimum direction saturates at the clamp: 2 * log(1e-7)
    CHECK(discriminator_loss({0.0}, {1.0}) == doctest::Approx(-32.23619130191664).epsilon(1e-9));
    // batch mean
    CHECK(discriminator_loss({0.5, 0.5}, {0.5, 0.5}) ==
          doctest::Approx(-1.3862943611198906).epsilon(1e-9));
}

TEST_CASE("generator fooling loss values") {
    CHECK(gan_generator_loss({0.5}) == doctest::Approx(-0.6931471805599453).epsilon(1e-9));
    CHECK(gan_generator_loss({0.9}) == doctest::Approx(-2.302585092994046).epsilon(1e-9));
    CHECK(std::abs(gan_generator_loss({0.0})) <= 1e-6);  // log 1
}

TEST_CASE("adversarial loss values") {
    SUBCASE("lambda=0 reduces to the target cross-entropy") {
        std::vector<double> pt{0.25, 0.75};
        std::vector<double> ps{0.9, 0.1};
        double v = adversarial_loss(pt, {1}, 2, ps, {0}, 2, 0.0);
        CHECK(v == doctest::Approx(-std::log(0.75)).epsilon(1e-9));
    }
    SUBCASE("perfect target + uniform sensitive over 2 classes at lambda=1 -> -log 2") {
        std::vector<double> pt{0.0, 1.0};
        std::vector<double> ps{0.5, 0.5};
        double v = adversarial_loss(pt, {1}, 2, ps, {0}, 2, 1.0);
        CHECK(v == doctest::Approx(-0.6931471805599453).epsilon(1e-6));
    }
    SUBCASE("identical predictions and labels cancel at lambda=1") {
        std::vector<double> p{0.3, 0.7};
        double v = adversarial_loss(p, {1}, 2, p, {1}, 2, 1.0);
        CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("hinge loss values") {
    SUBCASE("inside the cap") {
        std::vector<double> xp{0.5, 0.0};
        std::vector<double> xo{0.0, 0.0};  // norm 0.5
        CHECK(hinge_loss(xp, xo, 1, 1.0) == doctest::Approx(0.0));
    }
    SUBCASE("linear excess") {
        std::vector<double> xp{1.5, 0.0};
        std::vector<double> xo{0.0, 0.0};  // norm 1.5
        CHECK(hinge_loss(xp, xo, 1, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("degenerate cap c=0 gives the plain norm") {
        std::vector<double> xp{3.0, 4.0};
        std::vector<double> xo{0.0, 0.0};  // norm 5
        CHECK(hinge_loss(xp, xo, 1, 0.0) == doctest::Approx(5.0).epsilon(1e-12));
    }
}

TEST_CASE("total generator loss composition") {
    CHECK(generator_total_loss(-0.7, 0.3, 0.1, 0.0, 0.0) == doctest::Approx(-0.7));
    CHECK(generator_total_loss(-0.69, 0.5, 0.2, 1.0, 10.0) ==
          doctest::Approx(1.81).epsilon(1e-9));
    // scaling alpha doubles only the adversarial contribution
    double base = generator_total_loss(-0.5, 0.4, 0.3, 1.0, 2.0);
    double twice = generator_total_loss(-0.5, 0.4, 0.3, 2.0, 2.0);
    CHECK(twice - base == doctest::Approx(0.4).epsilon(1e-12));
}

namespace {

// FD check helper over a scalar function of one vector
template <typename F>
void fd_check(std::vector<double> x, F&& f, const std::vector<double>& analytic,
              double step = 1e-3) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        double fd = (f(xp) - f(xm)) / (2 * step);
        double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-8});
        CHECK(std::abs(fd - analytic[i]) / denom <= 1e-4);
    }
}

}  // namespace

TEST_CASE("loss gradients match finite differences") {
    Rng rng(5);
    SUBCASE("discriminator loss") {
        std::vector<double> d_fake{0.3, 0.6, 0.45};
        std::vector<double> d_real{0.7, 0.2, 0.5};
        std::vector<double> gf, gr;
        discriminator_loss_grad(d_fake, d_real, gf, gr);
        fd_check(d_fake, [&](const std::vector<double>& v) { return discriminator_loss(v, d_real); }, gf);
        fd_check(d_real, [&](const std::vector<double>& v) { return discriminator_loss(d_fake, v); }, gr);
    }
    SUBCASE("generator fooling loss") {
        std::vector<double> d_fake{0.25, 0.5, 0.8};
        std::vector<double> g;
        gan_generator_loss_grad(d_fake, g);
        fd_check(d_fake, [&](const std::vector<double>& v) { return gan_generator_loss(v); }, g);
    }
    SUBCASE("adversarial loss") {
        std::vector<double> pt{0.3, 0.7, 0.6, 0.4};
        std::vector<double> ps{0.2, 0.8, 0.5, 0.5};
        std::vector<int> yl{1, 0}, yp{0, 1};
        std::vector<double> gt, gs;
        adversarial_loss(pt, yl, 2, ps, yp, 2, 1.7, &gt, &gs);
        fd_check(pt, [&](const std::vector<double>& v) {
            return adversarial_loss(v, yl, 2, ps, yp, 2, 1.7);
        }, gt);
        fd_check(ps, [&](const std::vector<double>& v) {
            return adversarial_loss(pt, yl, 2, v, yp, 2, 1.7);
        }, gs);
    }
    SUBCASE("hinge loss away from the kink") {
        std::vector<double> xp{0.9, 0.2, 0.1, 0.8, 0.4, 0.3};
        std::vector<double> xo{0.1, 0.7, 0.6, 0.2, 0.9, 0.5};
        std::vector<double> g;
        hinge_loss(xp, xo, 2, 0.2, &g);
        fd_check(xp, [&](const std::vector<double>& v) { return hinge_loss(v, xo, 2, 0.2); }, g);
    }
}
