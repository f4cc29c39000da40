#include "doctest.h"

#include <cmath>
#include <limits>

#include "macgan/optimizer.hpp"

using namespace macgan;

namespace {

MlpNetwork small_net(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t widths[] = {2, 3, 1};
  return MlpNetwork::build(widths, Activation::Tanh, Activation::Identity, rng);
}

Gradients filled(const MlpNetwork& net, double v) {
  Gradients g = zero_gradients(net);
  for (Matrix& m : g.weight) m.fill(v);
  for (Matrix& m : g.bias) m.fill(v);
  return g;
}

}  // namespace

TEST_CASE("zero gradients leave parameters unchanged") {
  MlpNetwork net = small_net(1);
  const MlpNetwork before = net;
  Adam adam(AdamConfig{}, net);
  CHECK(adam.step(net, filled(net, 0.0)) == StepStatus::Applied);
  CHECK(net == before);
  CHECK(adam.step_count() == 1);
}

TEST_CASE("constant gradient moves each parameter by the learning rate") {
  MlpNetwork net = small_net(2);
  AdamConfig cfg;
  cfg.learning_rate = 1e-3;
  Adam adam(cfg, net);
  const Gradients g = filled(net, 0.37);
  for (int t = 0; t < 200; ++t) {
    const double before = net.layers()[0].weight(0, 0);
    adam.step(net, g);
    // Bias-corrected moments of a constant are exact: m_hat = g, v_hat = g^2.
    const double delta = before - net.layers()[0].weight(0, 0);
    CHECK(delta == doctest::Approx(cfg.learning_rate * 0.37 / (0.37 + cfg.epsilon)).epsilon(1e-9));
  }
  CHECK(adam.first_moment_weights()[0].rows() == 3);
  CHECK(adam.second_moment_weights()[1].cols() == 3);
}

TEST_CASE("non-finite gradients skip the step") {
  MlpNetwork net = small_net(3);
  const MlpNetwork before = net;
  Adam adam(AdamConfig{}, net);
  Gradients g = filled(net, 0.1);
  g.bias[1](0, 0) = std::numeric_limits<double>::infinity();
  CHECK(adam.step(net, g) == StepStatus::SkippedNonFinite);
  CHECK(net == before);
  CHECK(adam.step_count() == 0);
}

TEST_CASE("shape mismatch throws") {
  MlpNetwork net = small_net(4);
  Adam adam(AdamConfig{}, net);
  Gradients g = filled(net, 0.1);
  g.weight[0] = Matrix(2, 2);
  CHECK_THROWS_AS(adam.step(net, g), DimensionError);
  g.weight.pop_back();
  CHECK_THROWS_AS(adam.step(net, g), DimensionError);
}

TEST_CASE("identical runs are bit-identical") {
  auto run = [] {
    MlpNetwork net = small_net(5);
    Adam adam(AdamConfig{}, net);
    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
      Gradients g = zero_gradients(net);
      for (Matrix& m : g.weight) m = random_normal(m.rows(), m.cols(), rng);
      for (Matrix& m : g.bias) m = random_normal(m.rows(), m.cols(), rng);
      adam.step(net, g);
    }
    return net;
  };
  CHECK(run() == run());
}
