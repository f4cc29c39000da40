#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace macgan {

enum class LossVariant {
  WassersteinClip,  // critic scores, weight clipping
  NonSaturating,    // logits, logistic losses
};

std::string_view to_string(LossVariant v);
LossVariant loss_variant_from_string(std::string_view name);

/// Discriminator objective (minimized):
///   Wasserstein:    mean(D(G(z))) - mean(D(x)) - lambda * mac
///   NonSaturating:  mean softplus(-D(x)) + mean softplus(D(G(z))) - lambda * mac
/// With flip_mac_sign the regularizer enters as + lambda * mac.
double discriminator_loss(std::span<const double> d_out_real, std::span<const double> d_out_fake,
                          double mac_value, double lambda,
                          LossVariant variant = LossVariant::WassersteinClip,
                          bool flip_mac_sign = false);

/// Generator objective (minimized):
///   Wasserstein:    -mean(D(G(z))) + gamma * mac
///   NonSaturating:  mean softplus(-D(G(z))) + gamma * mac
double generator_loss(std::span<const double> d_out_fake, double mac_value, double gamma,
                      LossVariant variant = LossVariant::WassersteinClip);

/// Gradients of the adversarial part with respect to each critic output.
struct CriticGradients {
  std::vector<double> real;
  std::vector<double> fake;
};
CriticGradients discriminator_loss_grad(std::span<const double> d_out_real,
                                        std::span<const double> d_out_fake, LossVariant variant);
std::vector<double> generator_loss_grad(std::span<const double> d_out_fake, LossVariant variant);

}  // namespace macgan
