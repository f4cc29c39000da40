#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "macgan/losses.hpp"
#include "macgan/rng.hpp"

using namespace macgan;

namespace {

std::vector<double> normals(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

double softplus_ref(double x) { return std::log(1.0 + std::exp(x)); }

}  // namespace

TEST_CASE("discriminator_loss examples") {
  const std::vector<double> real{0.5, 0.9}, fake{0.1, 0.3};
  CHECK(discriminator_loss(real, fake, 0.1, 1.0) == doctest::Approx(-0.6));
  CHECK(discriminator_loss(real, fake, 123.0, 0.0) == doctest::Approx(0.2 - 0.7));
  CHECK(discriminator_loss(real, real, 0.0, 0.0) == 0.0);
  CHECK(discriminator_loss(real, fake, 0.1, 1.0, LossVariant::WassersteinClip, true) ==
        doctest::Approx(-0.4));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(discriminator_loss(real, fake, nan, 1.0), NumericalError);
  CHECK_THROWS_AS(discriminator_loss(std::vector<double>{nan}, fake, 0.0, 1.0), NumericalError);
  CHECK_THROWS_AS(discriminator_loss(std::vector<double>{}, fake, 0.0, 1.0), InputError);
}

TEST_CASE("generator_loss examples") {
  const std::vector<double> fake{0.1, 0.3};
  CHECK(generator_loss(fake, 0.1, 1.0) == doctest::Approx(-0.1));
  CHECK(generator_loss(fake, 5.0, 0.0) == doctest::Approx(-0.2));
  CHECK_THROWS_AS(generator_loss(fake, std::numeric_limits<double>::infinity(), 1.0),
                  NumericalError);
}

TEST_CASE("non-saturating losses match the logistic definition") {
  const std::vector<double> real{0.4, -1.2, 2.0}, fake{-0.3, 0.8};
  const double d = (softplus_ref(-0.4) + softplus_ref(1.2) + softplus_ref(-2.0)) / 3.0 +
                   (softplus_ref(-0.3) + softplus_ref(0.8)) / 2.0;
  CHECK(discriminator_loss(real, fake, 0.5, 2.0, LossVariant::NonSaturating) ==
        doctest::Approx(d - 1.0).epsilon(1e-13));
  const double g = (softplus_ref(0.3) + softplus_ref(-0.8)) / 2.0;
  CHECK(generator_loss(fake, 0.5, 2.0, LossVariant::NonSaturating) ==
        doctest::Approx(g + 1.0).epsilon(1e-13));
  // Large logits stay finite.
  const std::vector<double> huge{800.0}, tiny{-800.0};
  CHECK(std::isfinite(discriminator_loss(tiny, huge, 0.0, 0.0, LossVariant::NonSaturating)));
  CHECK(discriminator_loss(tiny, huge, 0.0, 0.0, LossVariant::NonSaturating) ==
        doctest::Approx(1600.0));
}

TEST_CASE("loss gradients match central differences") {
  Rng rng(1);
  for (LossVariant v : {LossVariant::WassersteinClip, LossVariant::NonSaturating}) {
    std::vector<double> real = normals(5, rng), fake = normals(4, rng);
    const CriticGradients g = discriminator_loss_grad(real, fake, v);
    const std::vector<double> gg = generator_loss_grad(fake, v);
    const double h = 1e-6;
    auto check = [&](std::vector<double>& x, const std::vector<double>& analytic, auto loss) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = loss();
        x[i] = keep - h;
        const double down = loss();
        x[i] = keep;
        CHECK(analytic[i] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-7));
      }
    };
    auto d = [&] { return discriminator_loss(real, fake, 0.0, 0.0, v); };
    check(real, g.real, d);
    check(fake, g.fake, d);
    check(fake, gg, [&] { return generator_loss(fake, 0.0, 0.0, v); });
  }
}

TEST_CASE("large gamma dominates the generator gradient") {
  // d/dmac of the loss is gamma; the adversarial part's gradient per output is 1/n.
  const std::vector<double> fake{0.1, 0.3, -0.2, 0.5};
  const std::vector<double> adv = generator_loss_grad(fake, LossVariant::WassersteinClip);
  double norm = 0.0;
  for (double x : adv) norm += x * x;
  const double dmac = (generator_loss(fake, 0.1 + 1e-6, 1e3) - generator_loss(fake, 0.1, 1e3)) / 1e-6;
  CHECK(dmac == doctest::Approx(1e3).epsilon(1e-6));
  CHECK(dmac > 100.0 * std::sqrt(norm));
}

TEST_CASE("loss variant names round trip") {
  for (LossVariant v : {LossVariant::WassersteinClip, LossVariant::NonSaturating}) {
    CHECK(loss_variant_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_AS(loss_variant_from_string("hinge"), InputError);
}
