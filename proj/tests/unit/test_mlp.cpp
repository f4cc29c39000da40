#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

#include "macgan/mlp.hpp"

using namespace macgan;

namespace {

Layer layer(Matrix w, Matrix b, Activation a) { return Layer{std::move(w), std::move(b), a}; }

MlpNetwork random_net(Rng& rng, std::size_t in, std::size_t out) {
  const std::size_t depth = 1 + rng.below(3);
  std::vector<std::size_t> widths{in};
  for (std::size_t i = 1; i < depth; ++i) widths.push_back(1 + rng.below(16));
  widths.push_back(out);
  const Activation pool[] = {Activation::LeakyReLU, Activation::Tanh, Activation::Logistic,
                             Activation::Identity};
  std::vector<Activation> acts;
  for (std::size_t i = 0; i < depth; ++i) acts.push_back(pool[rng.below(4)]);
  MlpNetwork net = MlpNetwork::build(widths, acts, rng);
  for (Layer& l : net.mutable_layers()) {
    for (double& v : l.bias.values()) v = rng.normal() * 0.1;
  }
  return net;
}

}  // namespace

TEST_CASE("forward examples") {
  MlpNetwork id(std::vector<Layer>{layer(Matrix::identity(2), Matrix(2, 1), Activation::Identity)});
  const Matrix x = Matrix::from_rows({{1, -2, 3}, {0.5, 4, -1}});
  CHECK(id.forward(x) == x);

  MlpNetwork relu(std::vector<Layer>{layer(Matrix::identity(2), Matrix(2, 1), Activation::ReLU)});
  CHECK(relu.forward(Matrix::from_rows({{-1}, {2}})) == Matrix::from_rows({{0}, {2}}));

  // tanh then logistic, hand-composed.
  MlpNetwork two(std::vector<Layer>{
      layer(Matrix::from_rows({{0.5, -0.25}, {0.1, 0.2}}), Matrix::from_rows({{0.1}, {0}}),
            Activation::Tanh),
      layer(Matrix::from_rows({{1.0, -2.0}}), Matrix::from_rows({{0.3}}), Activation::Logistic)});
  const Matrix in = Matrix::from_rows({{1.0}, {2.0}});
  const double h0 = std::tanh(0.5 - 0.5 + 0.1), h1 = std::tanh(0.1 + 0.4);
  const double want = 1.0 / (1.0 + std::exp(-(h0 - 2.0 * h1 + 0.3)));
  CHECK(two.forward(in)(0, 0) == doctest::Approx(want).epsilon(1e-15));
  CHECK(two.predict(in) == two.forward(in));

  CHECK_THROWS_AS(two.forward(Matrix(3, 1)), DimensionError);
  CHECK_THROWS_AS(MlpNetwork(std::vector<Layer>{layer(Matrix(2, 2), Matrix(2, 1), Activation::ReLU),
                                                layer(Matrix(1, 3), Matrix(1, 1), Activation::ReLU)}),
                  DimensionError);
}

TEST_CASE("leaky relu slope") {
  MlpNetwork net(std::vector<Layer>{layer(Matrix::identity(1), Matrix(1, 1), Activation::LeakyReLU)});
  CHECK(net.forward(Matrix::from_rows({{-5.0}}))(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("activation names round trip") {
  for (Activation a : {Activation::ReLU, Activation::LeakyReLU, Activation::Tanh,
                       Activation::Identity, Activation::Logistic}) {
    CHECK(activation_from_string(to_string(a)) == a);
  }
  CHECK_THROWS_AS(activation_from_string("gelu"), InputError);
}

TEST_CASE("backward examples") {
  Rng rng(1);
  MlpNetwork net = random_net(rng, 3, 2);
  const Matrix x = random_normal(3, 4, rng);
  CHECK_THROWS_AS(net.backward(Matrix(2, 4)), InputError);
  net.forward(x);
  const Gradients zero = net.backward(Matrix(2, 4));
  for (const Matrix& w : zero.weight) CHECK(max_abs(w) == 0.0);
  for (const Matrix& b : zero.bias) CHECK(max_abs(b) == 0.0);
  CHECK(max_abs(zero.input) == 0.0);
  CHECK_THROWS_AS(net.backward(Matrix(3, 4)), DimensionError);

  net.mutable_layers();
  CHECK_FALSE(net.cache_fresh());
  CHECK_THROWS_AS(net.backward(Matrix(2, 4)), InputError);
}

TEST_CASE("scalar chain gradient is the product of local derivatives") {
  const double w1 = 0.7, b1 = 0.1, w2 = -1.3, b2 = 0.2, x = 0.4;
  MlpNetwork net(std::vector<Layer>{
      layer(Matrix::from_rows({{w1}}), Matrix::from_rows({{b1}}), Activation::Tanh),
      layer(Matrix::from_rows({{w2}}), Matrix::from_rows({{b2}}), Activation::Logistic)});
  net.forward(Matrix::from_rows({{x}}));
  const Gradients g = net.backward(Matrix::from_rows({{1.0}}));
  const double h = std::tanh(w1 * x + b1);
  const double y = 1.0 / (1.0 + std::exp(-(w2 * h + b2)));
  const double dy = y * (1 - y);
  const double dh = 1 - h * h;
  CHECK(g.weight[1](0, 0) == doctest::Approx(dy * h).epsilon(1e-14));
  CHECK(g.bias[1](0, 0) == doctest::Approx(dy).epsilon(1e-14));
  CHECK(g.weight[0](0, 0) == doctest::Approx(dy * w2 * dh * x).epsilon(1e-14));
  CHECK(g.bias[0](0, 0) == doctest::Approx(dy * w2 * dh).epsilon(1e-14));
  CHECK(g.input(0, 0) == doctest::Approx(dy * w2 * dh * w1).epsilon(1e-14));
}

TEST_CASE("full-network gradients match central differences") {
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const std::size_t in = 1 + rng.below(6), out = 1 + rng.below(4), n = 1 + rng.below(5);
    MlpNetwork net = random_net(rng, in, out);
    Matrix x = random_normal(in, n, rng);
    const Matrix dir = random_normal(out, n, rng);
    auto loss = [&] { return frobenius_dot(net.predict(x), dir); };
    net.forward(x);
    const Gradients g = net.backward(dir);
    CHECK(oracle::relative_error(g.input, oracle::numeric_gradient(x, loss)) < 1e-6);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      auto& layers = net.mutable_layers();
      CHECK(oracle::relative_error(g.weight[l], oracle::numeric_gradient(layers[l].weight, loss)) <
            1e-6);
      CHECK(oracle::relative_error(g.bias[l], oracle::numeric_gradient(layers[l].bias, loss)) <
            1e-6);
    }
  }
}

TEST_CASE("param_grads false keeps only the input gradient") {
  Rng rng(3);
  MlpNetwork net = random_net(rng, 3, 2);
  const Matrix x = random_normal(3, 5, rng);
  const Matrix dir = random_normal(2, 5, rng);
  net.forward(x);
  const Gradients full = net.backward(dir);
  const Gradients only = net.backward(dir, false);
  CHECK(only.input == full.input);
}

TEST_CASE("hidden_features and injected gradients") {
  Rng rng(4);
  const std::size_t widths[] = {3, 6, 5, 2};
  MlpNetwork net = MlpNetwork::build(widths, Activation::Tanh, Activation::Identity, rng);
  const Matrix x = random_normal(3, 4, rng);

  CHECK(hidden_features(net, x, 2).data == net.forward(x));
  CHECK_THROWS_AS(hidden_features(net, x, 3), DimensionError);
  const FeatureBatch fb = hidden_features(net, x, 1, SampleSource::Generated);
  CHECK(fb.source == SampleSource::Generated);
  CHECK(fb.dim() == 5);

  MlpNetwork id(std::vector<Layer>{layer(Matrix::identity(3), Matrix(3, 1), Activation::Identity)});
  CHECK(hidden_features(id, x, 0).data == x);

  // A seed at layer 1 leaves the output layer untouched.
  net.forward(x);
  const Matrix seed = random_normal(5, 4, rng);
  const GradientSeed s[] = {{1, seed}};
  const Gradients g = net.backward(s);
  CHECK(max_abs(g.weight[2]) == 0.0);
  CHECK(max_abs(g.bias[2]) == 0.0);
  CHECK(max_abs(g.weight[1]) > 0.0);
  CHECK(max_abs(g.weight[0]) > 0.0);

  // Same gradients as the explicit scalar <h1(x), seed>.
  auto loss = [&] {
    MlpNetwork copy = net;
    return frobenius_dot(hidden_features(copy, x, 1).data, seed);
  };
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(oracle::relative_error(g.weight[l],
                                 oracle::numeric_gradient(net.mutable_layers()[l].weight, loss)) <
          1e-6);
  }

  // Seeds at two layers add up.
  net.forward(x);
  const Matrix top = random_normal(2, 4, rng);
  const GradientSeed both[] = {{1, seed}, {2, top}};
  Gradients sum = net.backward(s);
  sum += net.backward(top);
  const Gradients joint = net.backward(both);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(max_abs(joint.weight[l] - sum.weight[l]) < 1e-12);
  }
  const GradientSeed bad[] = {{3, seed}};
  CHECK_THROWS_AS(net.backward(bad), DimensionError);
}

TEST_CASE("bias-free relu stacks are positively homogeneous") {
  Rng rng(5);
  const std::size_t widths[] = {4, 8, 8, 3};
  const MlpNetwork net = MlpNetwork::build(widths, Activation::ReLU, Activation::ReLU, rng);
  const Matrix x = random_normal(4, 6, rng);
  for (double s : {0.1, 2.0, 37.5}) {
    CHECK(max_abs(net.predict(x * s) - net.predict(x) * s) <= 1e-12 * s * (1 + max_abs(net.predict(x))));
  }
}

TEST_CASE("build initializes within the scaled uniform bound") {
  Rng rng(6);
  const std::size_t widths[] = {8, 128, 1};
  const MlpNetwork net = MlpNetwork::build(widths, Activation::LeakyReLU, Activation::Identity, rng);
  CHECK(net.parameter_count() == 8 * 128 + 128 + 128 + 1);
  CHECK(max_abs(net.layers()[0].weight) <= std::sqrt(6.0 / 136.0));
  CHECK(max_abs(net.layers()[0].bias) == 0.0);
  Rng again(6);
  CHECK(MlpNetwork::build(widths, Activation::LeakyReLU, Activation::Identity, again) == net);
}

TEST_CASE("clip_parameters") {
  Rng rng(7);
  const std::size_t widths[] = {3, 4, 1};
  MlpNetwork net = MlpNetwork::build(widths, Activation::ReLU, Activation::Identity, rng);
  clip_parameters(net, 0.05);
  for (const Layer& l : net.layers()) CHECK(max_abs(l.weight) <= 0.05);
  const Gradients z = zero_gradients(net);
  CHECK(z.weight.size() == 2);
  CHECK(z.weight[0].rows() == 4);
}
