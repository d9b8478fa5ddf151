#ifndef PRGAN_LOSSES_HPP
#define PRGAN_LOSSES_HPP

#include <vector>

namespace prgan::gan {

inline constexpr double kProbClamp = 1e-7;

// Discriminator objective: mean log D(G(x)) + mean log(1 - D(x)).
// Minimizing drives D(G(x)) -> 0 and D(x) -> 1. Inputs are probabilities,
// clamped to [1e-7, 1-1e-7] before the logs.
double discriminator_loss(const std::vector<double>& d_fake, const std::vector<double>& d_real);
void discriminator_loss_grad(const std::vector<double>& d_fake, const std::vector<double>& d_real,
                             std::vector<double>& g_fake, std::vector<double>& g_real);

// Gradient of the bounded discriminator objective
// -mean log(1 - d_fake) - mean log d_real, the standard two-sided
// cross-entropy with the same fixed point (fakes -> 0, reals -> 1, optimum
// P_data / (P_data + P_g)). The raw objective above is unbounded below in
// its fake term and destabilizes training; the trainer steps with this one.
void discriminator_step_grad(const std::vector<double>& d_fake, const std::vector<double>& d_real,
                             std::vector<double>& g_fake, std::vector<double>& g_real);

// Generator's fooling objective: mean log(1 - D(G(x))), minimized as D(G(x)) -> 1.
double gan_generator_loss(const std::vector<double>& d_fake);
void gan_generator_loss_grad(const std::vector<double>& d_fake, std::vector<double>& g);

// Gradient of the non-saturating surrogate -mean log D(G(x)). Same fixed
// point (D(G(x)) -> 1) but the gradient stays alive when the discriminator
// confidently rejects fakes; the trainer steps with this one.
void gan_generator_loss_grad_nonsaturating(const std::vector<double>& d_fake,
                                           std::vector<double>& g);

// mean[ ce(p_target, y_target) - lambda * ce(p_sensitive, y_sensitive) ].
// Gradients are w.r.t. the probability matrices and carry the mean reduction.
double adversarial_loss(const std::vector<double>& p_target, const std::vector<int>& y_target,
                        int target_classes, const std::vector<double>& p_sensitive,
                        const std::vector<int>& y_sensitive, int sensitive_classes, double lambda,
                        std::vector<double>* g_target = nullptr,
                        std::vector<double>* g_sensitive = nullptr);

// mean over records of max(0, ||x_pert - x_orig||_2 - c), Euclidean norm over
// the flattened feature vector.
double hinge_loss(const std::vector<double>& x_pert, const std::vector<double>& x_orig,
                  int batch, double cap, std::vector<double>* g_pert = nullptr);

// L_GAN + alpha * L_Adv + beta * L_hinge.
double generator_total_loss(double gan_term, double adv_term, double hinge_term,
                            double alpha, double beta);

}  // namespace prgan::gan

#endif
