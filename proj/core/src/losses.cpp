#include "macgan/losses.hpp"

#include <cmath>
#include <string>

#include "macgan/error.hpp"

namespace macgan {
namespace {

double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double mean(std::span<const double> v) {
  if (v.empty()) throw InputError("loss: empty critic output");
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double mean_softplus(std::span<const double> v, double sign) {
  if (v.empty()) throw InputError("loss: empty critic output");
  double sum = 0.0;
  for (double x : v) sum += softplus(sign * x);
  return sum / static_cast<double>(v.size());
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite value");
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) require_finite(x, what);
}

}  // namespace

std::string_view to_string(LossVariant v) {
  return v == LossVariant::WassersteinClip ? "wasserstein_clip" : "non_saturating";
}

LossVariant loss_variant_from_string(std::string_view name) {
  if (name == "wasserstein_clip") return LossVariant::WassersteinClip;
  if (name == "non_saturating") return LossVariant::NonSaturating;
  throw InputError("unknown loss variant '" + std::string(name) + "'");
}

double discriminator_loss(std::span<const double> d_out_real, std::span<const double> d_out_fake,
                          double mac_value, double lambda, LossVariant variant,
                          bool flip_mac_sign) {
  require_finite(d_out_real, "discriminator_loss");
  require_finite(d_out_fake, "discriminator_loss");
  require_finite(mac_value, "discriminator_loss");
  double loss = variant == LossVariant::WassersteinClip
                    ? mean(d_out_fake) - mean(d_out_real)
                    : mean_softplus(d_out_real, -1.0) + mean_softplus(d_out_fake, 1.0);
  if (lambda != 0.0) loss += (flip_mac_sign ? lambda : -lambda) * mac_value;
  return loss;
}

double generator_loss(std::span<const double> d_out_fake, double mac_value, double gamma,
                      LossVariant variant) {
  require_finite(d_out_fake, "generator_loss");
  require_finite(mac_value, "generator_loss");
  double loss = variant == LossVariant::WassersteinClip ? -mean(d_out_fake)
                                                        : mean_softplus(d_out_fake, -1.0);
  if (gamma != 0.0) loss += gamma * mac_value;
  return loss;
}

CriticGradients discriminator_loss_grad(std::span<const double> d_out_real,
                                        std::span<const double> d_out_fake,
                                        LossVariant variant) {
  CriticGradients g{std::vector<double>(d_out_real.size()), std::vector<double>(d_out_fake.size())};
  const double inv_real = 1.0 / static_cast<double>(d_out_real.size());
  const double inv_fake = 1.0 / static_cast<double>(d_out_fake.size());
  for (std::size_t i = 0; i < d_out_real.size(); ++i) {
    g.real[i] = variant == LossVariant::WassersteinClip
                    ? -inv_real
                    : -inv_real * sigmoid(-d_out_real[i]);
  }
  for (std::size_t i = 0; i < d_out_fake.size(); ++i) {
    g.fake[i] = variant == LossVariant::WassersteinClip ? inv_fake
                                                        : inv_fake * sigmoid(d_out_fake[i]);
  }
  return g;
}

std::vector<double> generator_loss_grad(std::span<const double> d_out_fake, LossVariant variant) {
  std::vector<double> g(d_out_fake.size());
  const double inv = 1.0 / static_cast<double>(d_out_fake.size());
  for (std::size_t i = 0; i < d_out_fake.size(); ++i) {
    g[i] = variant == LossVariant::WassersteinClip ? -inv : -inv * sigmoid(-d_out_fake[i]);
  }
  return g;
}

}  // namespace macgan
