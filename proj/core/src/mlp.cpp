#include "macgan/mlp.hpp"

#include <algorithm>
#include <cmath>

namespace macgan {
namespace {

double activate(Activation a, double x) noexcept {
  switch (a) {
    case Activation::ReLU: return x > 0.0 ? x : 0.0;
    case Activation::LeakyReLU: return x > 0.0 ? x : kLeakySlope * x;
    case Activation::Tanh: return std::tanh(x);
    case Activation::Logistic: return 1.0 / (1.0 + std::exp(-x));
    case Activation::Identity: return x;
  }
  return x;
}

// Derivative expressed through the pre-activation and the output.
double derivative(Activation a, double pre, double out) noexcept {
  switch (a) {
    case Activation::ReLU: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::LeakyReLU: return pre > 0.0 ? 1.0 : kLeakySlope;
    case Activation::Tanh: return 1.0 - out * out;
    case Activation::Logistic: return out * (1.0 - out);
    case Activation::Identity: return 1.0;
  }
  return 1.0;
}

Matrix affine(const Layer& layer, const Matrix& x) {
  Matrix pre = matmul(layer.weight, x);
  for (std::size_t r = 0; r < pre.rows(); ++r) {
    const double b = layer.bias(r, 0);
    for (double& v : pre.row(r)) v += b;
  }
  return pre;
}

Matrix apply(Activation a, const Matrix& pre) {
  if (a == Activation::Identity) return pre;
  Matrix out(pre.rows(), pre.cols());
  const auto in = pre.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < in.size(); ++i) dst[i] = activate(a, in[i]);
  return out;
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::ReLU: return "relu";
    case Activation::LeakyReLU: return "leaky_relu";
    case Activation::Tanh: return "tanh";
    case Activation::Identity: return "identity";
    case Activation::Logistic: return "logistic";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  for (Activation a : {Activation::ReLU, Activation::LeakyReLU, Activation::Tanh,
                       Activation::Identity, Activation::Logistic}) {
    if (to_string(a) == name) return a;
  }
  throw InputError("unknown activation '" + std::string(name) + "'");
}

Gradients& Gradients::operator+=(const Gradients& other) {
  if (weight.size() != other.weight.size()) throw DimensionError("Gradients: layer mismatch");
  for (std::size_t l = 0; l < weight.size(); ++l) {
    weight[l] += other.weight[l];
    bias[l] += other.bias[l];
  }
  if (!other.input.empty()) {
    if (input.empty()) {
      input = other.input;
    } else {
      input += other.input;
    }
  }
  return *this;
}

bool Gradients::all_finite() const noexcept {
  for (std::size_t l = 0; l < weight.size(); ++l) {
    if (!weight[l].all_finite() || !bias[l].all_finite()) return false;
  }
  return input.all_finite();
}

MlpNetwork::MlpNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) { validate(); }

void MlpNetwork::validate() const {
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.bias.rows() != layer.out() || layer.bias.cols() != 1) {
      throw DimensionError("MlpNetwork: layer " + std::to_string(l) + " bias shape");
    }
    if (l > 0 && layers_[l - 1].out() != layer.in()) {
      throw DimensionError("MlpNetwork: layer " + std::to_string(l) + " expects " +
                           std::to_string(layer.in()) + " inputs but previous layer emits " +
                           std::to_string(layers_[l - 1].out()));
    }
  }
}

MlpNetwork MlpNetwork::build(std::span<const std::size_t> widths,
                             std::span<const Activation> activations, Rng& rng) {
  if (widths.size() < 2 || activations.size() != widths.size() - 1) {
    throw DimensionError("MlpNetwork::build: need one activation per layer");
  }
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t in = widths[l];
    const std::size_t out = widths[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    layers.push_back(Layer{random_uniform(out, in, rng, -bound, bound), Matrix(out, 1),
                           activations[l]});
  }
  return MlpNetwork(std::move(layers));
}

MlpNetwork MlpNetwork::build(std::span<const std::size_t> widths, Activation hidden,
                             Activation output, Rng& rng) {
  if (widths.size() < 2) throw DimensionError("MlpNetwork::build: need at least one layer");
  std::vector<Activation> acts(widths.size() - 1, hidden);
  acts.back() = output;
  return build(widths, acts, rng);
}

std::size_t MlpNetwork::input_width() const {
  if (layers_.empty()) throw DimensionError("MlpNetwork: no layers");
  return layers_.front().in();
}

std::size_t MlpNetwork::output_width() const {
  if (layers_.empty()) throw DimensionError("MlpNetwork: no layers");
  return layers_.back().out();
}

std::size_t MlpNetwork::parameter_count() const noexcept {
  std::size_t count = 0;
  for (const Layer& l : layers_) count += l.weight.size() + l.bias.size();
  return count;
}

const Matrix& MlpNetwork::forward(const Matrix& x) {
  if (x.rows() != input_width()) {
    throw DimensionError("forward: input has " + std::to_string(x.rows()) +
                         " rows, network expects " + std::to_string(input_width()));
  }
  fresh_ = false;
  input_ = x;
  pre_.resize(layers_.size());
  post_.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    pre_[l] = affine(layers_[l], l == 0 ? input_ : post_[l - 1]);
    post_[l] = apply(layers_[l].activation, pre_[l]);
  }
  fresh_ = true;
  return post_.back();
}

Matrix MlpNetwork::predict(const Matrix& x) const {
  if (x.rows() != input_width()) {
    throw DimensionError("predict: input has " + std::to_string(x.rows()) +
                         " rows, network expects " + std::to_string(input_width()));
  }
  Matrix h = x;
  for (const Layer& layer : layers_) h = apply(layer.activation, affine(layer, h));
  return h;
}

const Matrix& MlpNetwork::layer_output(std::size_t i) const {
  if (!fresh_) throw InputError("MlpNetwork: cache is stale; call forward() first");
  if (i >= post_.size()) {
    throw DimensionError("MlpNetwork: layer index " + std::to_string(i) + " out of range");
  }
  return post_[i];
}

Gradients MlpNetwork::backward(const Matrix& upstream, bool param_grads) const {
  const GradientSeed seed{layers_.size() - 1, upstream};
  return backward(std::span<const GradientSeed>(&seed, 1), param_grads);
}

Gradients MlpNetwork::backward(std::span<const GradientSeed> seeds, bool param_grads) const {
  if (!fresh_) throw InputError("backward: cache is stale; call forward() first");
  const std::size_t layers = layers_.size();
  for (const GradientSeed& s : seeds) {
    if (s.layer >= layers) {
      throw DimensionError("backward: seed layer " + std::to_string(s.layer) + " out of range");
    }
    if (s.grad.rows() != post_[s.layer].rows() || s.grad.cols() != post_[s.layer].cols()) {
      throw DimensionError("backward: seed gradient shape does not match layer " +
                           std::to_string(s.layer) + " output");
    }
  }

  Gradients out;
  out.weight.resize(layers);
  out.bias.resize(layers);

  Matrix g;  // gradient w.r.t. post-activation of the current layer
  bool live = false;
  for (std::size_t l = layers; l-- > 0;) {
    const Layer& layer = layers_[l];
    for (const GradientSeed& s : seeds) {
      if (s.layer != l) continue;
      if (!live) {
        g = s.grad;
        live = true;
      } else {
        g += s.grad;
      }
    }
    if (!live) {
      out.weight[l] = Matrix(layer.out(), layer.in());
      out.bias[l] = Matrix(layer.out(), 1);
      continue;
    }
    Matrix delta = std::move(g);
    if (layer.activation != Activation::Identity) {
      const auto pre = pre_[l].values();
      const auto post = post_[l].values();
      auto dv = delta.values();
      for (std::size_t i = 0; i < dv.size(); ++i) {
        dv[i] *= derivative(layer.activation, pre[i], post[i]);
      }
    }
    const Matrix& in = l == 0 ? input_ : post_[l - 1];
    if (param_grads) {
      out.weight[l] = matmul_nt(delta, in);
      Matrix db(layer.out(), 1);
      for (std::size_t r = 0; r < delta.rows(); ++r) {
        double sum = 0.0;
        for (double v : delta.row(r)) sum += v;
        db(r, 0) = sum;
      }
      out.bias[l] = std::move(db);
    } else {
      out.weight[l] = Matrix(layer.out(), layer.in());
      out.bias[l] = Matrix(layer.out(), 1);
    }
    g = matmul_tn(layer.weight, delta);
  }
  out.input = live ? std::move(g) : Matrix(input_.rows(), input_.cols());
  return out;
}

bool operator==(const MlpNetwork& a, const MlpNetwork& b) noexcept {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t l = 0; l < a.layers_.size(); ++l) {
    const Layer& x = a.layers_[l];
    const Layer& y = b.layers_[l];
    if (x.activation != y.activation || !(x.weight == y.weight) || !(x.bias == y.bias)) {
      return false;
    }
  }
  return true;
}

FeatureBatch hidden_features(MlpNetwork& net, const Matrix& x, std::size_t layer_index,
                             SampleSource source) {
  if (layer_index >= net.layer_count()) {
    throw DimensionError("hidden_features: layer index " + std::to_string(layer_index) +
                         " out of range");
  }
  net.forward(x);
  return FeatureBatch(net.layer_output(layer_index), source);
}

Gradients zero_gradients(const MlpNetwork& net) {
  Gradients g;
  for (const Layer& l : net.layers()) {
    g.weight.emplace_back(l.out(), l.in());
    g.bias.emplace_back(l.out(), 1);
  }
  return g;
}

void clip_parameters(MlpNetwork& net, double limit) {
  for (Layer& l : net.mutable_layers()) {
    for (double& v : l.weight.values()) v = std::clamp(v, -limit, limit);
    for (double& v : l.bias.values()) v = std::clamp(v, -limit, limit);
  }
}

}  // namespace macgan
