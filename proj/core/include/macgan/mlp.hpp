#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "macgan/rng.hpp"
#include "macgan/types.hpp"

namespace macgan {

enum class Activation { ReLU, LeakyReLU, Tanh, Identity, Logistic };

inline constexpr double kLeakySlope = 0.2;

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

struct Layer {
  Matrix weight;  // out x in
  Matrix bias;    // out x 1
  Activation activation = Activation::Identity;

  std::size_t in() const noexcept { return weight.cols(); }
  std::size_t out() const noexcept { return weight.rows(); }
};

/// Parameter gradients of every layer plus the gradient with respect to the
/// network input.
struct Gradients {
  std::vector<Matrix> weight;
  std::vector<Matrix> bias;
  Matrix input;

  /// Accumulates other into this; shapes must match.
  Gradients& operator+=(const Gradients& other);
  bool all_finite() const noexcept;
};

/// Gradient with respect to the post-activation output of `layer`.
struct GradientSeed {
  std::size_t layer = 0;
  Matrix grad;
};

/// Fully connected network; samples are columns. forward() caches the layer
/// inputs and pre-activations that backward() consumes. Any parameter change
/// through mutable_layers() invalidates the cache.
class MlpNetwork {
 public:
  MlpNetwork() = default;
  explicit MlpNetwork(std::vector<Layer> layers);

  /// widths = {in, h1, ..., out}; activations has one entry per layer.
  /// Weights are drawn uniformly within +-sqrt(6 / (fan_in + fan_out)),
  /// biases start at zero.
  static MlpNetwork build(std::span<const std::size_t> widths,
                          std::span<const Activation> activations, Rng& rng);
  static MlpNetwork build(std::span<const std::size_t> widths, Activation hidden,
                          Activation output, Rng& rng);

  std::size_t layer_count() const noexcept { return layers_.size(); }
  std::size_t input_width() const;
  std::size_t output_width() const;
  std::size_t parameter_count() const noexcept;

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& mutable_layers() noexcept {
    fresh_ = false;
    return layers_;
  }

  /// Runs the network on x (in x n) and caches intermediate values.
  const Matrix& forward(const Matrix& x);
  /// Runs the network without touching the cache.
  Matrix predict(const Matrix& x) const;

  bool cache_fresh() const noexcept { return fresh_; }
  void invalidate_cache() noexcept { fresh_ = false; }
  /// Cached post-activation output of layer i from the last forward().
  const Matrix& layer_output(std::size_t i) const;
  const Matrix& output() const { return layer_output(layers_.size() - 1); }

  /// Reverse-mode gradients for an upstream gradient at the output.
  Gradients backward(const Matrix& upstream, bool param_grads = true) const;
  /// Reverse-mode gradients for gradients injected at arbitrary layers.
  /// Layers above the highest seeded layer receive exactly zero gradients.
  Gradients backward(std::span<const GradientSeed> seeds, bool param_grads = true) const;

  friend bool operator==(const MlpNetwork& a, const MlpNetwork& b) noexcept;

 private:
  void validate() const;

  std::vector<Layer> layers_;
  Matrix input_;
  std::vector<Matrix> pre_;
  std::vector<Matrix> post_;
  bool fresh_ = false;
};

/// Post-activation output of `layer_index` after running the network on x.
FeatureBatch hidden_features(MlpNetwork& net, const Matrix& x, std::size_t layer_index,
                             SampleSource source = SampleSource::Real);

/// Zero-filled gradients shaped like the network's parameters.
Gradients zero_gradients(const MlpNetwork& net);

/// Clamps every weight and bias to [-limit, limit].
void clip_parameters(MlpNetwork& net, double limit);

}  // namespace macgan
