#include "prgan/losses.hpp"

#include <algorithm>
#include <cmath>

#include "prgan/errors.hpp"

namespace prgan::gan {

namespace {
inline double clamp_prob(double p) {
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}
inline bool clamped(double p) { return p <= kProbClamp || p >= 1.0 - kProbClamp; }
}  // namespace

double discriminator_loss(const std::vector<double>& d_fake, const std::vector<double>& d_real) {
    std::size_t n = d_fake.size();
    double fake = 0.0, real = 0.0;
    for (double p : d_fake) fake += std::log(clamp_prob(p));
    for (double p : d_real) real += std::log(1.0 - clamp_prob(p));
    return fake / n + real / d_real.size();
}

void discriminator_loss_grad(const std::vector<double>& d_fake, const std::vector<double>& d_real,
                             std::vector<double>& g_fake, std::vector<double>& g_real) {
    g_fake.resize(d_fake.size());
    g_real.resize(d_real.size());
    for (std::size_t i = 0; i < d_fake.size(); ++i)
        g_fake[i] = clamped(d_fake[i]) ? 0.0 : 1.0 / (d_fake.size() * d_fake[i]);
    for (std::size_t i = 0; i < d_real.size(); ++i)
        g_real[i] = clamped(d_real[i]) ? 0.0 : -1.0 / (d_real.size() * (1.0 - d_real[i]));
}

void discriminator_step_grad(const std::vector<double>& d_fake, const std::vector<double>& d_real,
                             std::vector<double>& g_fake, std::vector<double>& g_real) {
    g_fake.resize(d_fake.size());
    g_real.resize(d_real.size());
    for (std::size_t i = 0; i < d_fake.size(); ++i)
        g_fake[i] = clamped(d_fake[i]) ? 0.0 : 1.0 / (d_fake.size() * (1.0 - d_fake[i]));
    for (std::size_t i = 0; i < d_real.size(); ++i)
        g_real[i] = clamped(d_real[i]) ? 0.0 : -1.0 / (d_real.size() * d_real[i]);
}

double gan_generator_loss(const std::vector<double>& d_fake) {
    double acc = 0.0;
    for (double p : d_fake) acc += std::log(1.0 - clamp_prob(p));
    return acc / d_fake.size();
}

void gan_generator_loss_grad(const std::vector<double>& d_fake, std::vector<double>& g) {
    g.resize(d_fake.size());
    for (std::size_t i = 0; i < d_fake.size(); ++i)
        g[i] = clamped(d_fake[i]) ? 0.0 : -1.0 / (d_fake.size() * (1.0 - d_fake[i]));
}

void gan_generator_loss_grad_nonsaturating(const std::vector<double>& d_fake,
                                           std::vector<double>& g) {
    g.resize(d_fake.size());
    for (std::size_t i = 0; i < d_fake.size(); ++i)
        g[i] = clamped(d_fake[i]) ? 0.0 : -1.0 / (d_fake.size() * d_fake[i]);
}

double adversarial_loss(const std::vector<double>& p_target, const std::vector<int>& y_target,
                        int target_classes, const std::vector<double>& p_sensitive,
                        const std::vector<int>& y_sensitive, int sensitive_classes, double lambda,
                        std::vector<double>* g_target, std::vector<double>* g_sensitive) {
    std::size_t n = y_target.size();
    if (g_target) g_target->assign(p_target.size(), 0.0);
    if (g_sensitive) g_sensitive->assign(p_sensitive.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double pt = clamp_prob(p_target[i * target_classes + y_target[i]]);
        double ps = clamp_prob(p_sensitive[i * sensitive_classes + y_sensitive[i]]);
        total += -std::log(pt) + lambda * std::log(ps);
        if (g_target && !clamped(p_target[i * target_classes + y_target[i]]))
            (*g_target)[i * target_classes + y_target[i]] = -1.0 / (n * pt);
        if (g_sensitive && !clamped(p_sensitive[i * sensitive_classes + y_sensitive[i]]))
            (*g_sensitive)[i * sensitive_classes + y_sensitive[i]] = lambda / (n * ps);
    }
    return total / n;
}

double hinge_loss(const std::vector<double>& x_pert, const std::vector<double>& x_orig,
                  int batch, double cap, std::vector<double>* g_pert) {
    if (x_pert.size() != x_orig.size()) throw ShapeMismatch("hinge_loss: shape mismatch");
    std::size_t dim = x_pert.size() / batch;
    if (g_pert) g_pert->assign(x_pert.size(), 0.0);
    double total = 0.0;
    for (int i = 0; i < batch; ++i) {
        const double* xp = x_pert.data() + static_cast<std::size_t>(i) * dim;
        const double* xo = x_orig.data() + static_cast<std::size_t>(i) * dim;
        double sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) sq += (xp[j] - xo[j]) * (xp[j] - xo[j]);
        double norm = std::sqrt(sq);
        double excess = norm - cap;
        if (excess > 0.0) {
            total += excess;
            if (g_pert && norm > 0.0) {
                double scale = 1.0 / (batch * norm);
                double* g = g_pert->data() + static_cast<std::size_t>(i) * dim;
                for (std::size_t j = 0; j < dim; ++j) g[j] = (xp[j] - xo[j]) * scale;
            }
        }
    }
    return total / batch;
}

double generator_total_loss(double gan_term, double adv_term, double hinge_term,
                            double alpha, double beta) {
    return gan_term + alpha * adv_term + beta * hinge_term;
}

}  // namespace prgan::gan
