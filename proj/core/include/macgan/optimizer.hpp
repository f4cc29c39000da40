#pragma once

#include <vector>

#include "macgan/mlp.hpp"

namespace macgan {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

enum class StepStatus { Applied, SkippedNonFinite };

/// Adaptive-moment optimizer state for one network.
class Adam {
 public:
  Adam(const AdamConfig& config, const MlpNetwork& net);

  /// One bias-corrected update. Non-finite gradients leave the parameters and
  /// moments untouched.
  StepStatus step(MlpNetwork& net, const Gradients& grads);

  const AdamConfig& config() const noexcept { return config_; }
  std::size_t step_count() const noexcept { return steps_; }
  const std::vector<Matrix>& first_moment_weights() const noexcept { return m_weight_; }
  const std::vector<Matrix>& second_moment_weights() const noexcept { return v_weight_; }

 private:
  void update(Matrix& param, Matrix& m, Matrix& v, const Matrix& g, double c1, double c2) const;

  AdamConfig config_;
  std::size_t steps_ = 0;
  std::vector<Matrix> m_weight_, v_weight_, m_bias_, v_bias_;
};

}  // namespace macgan
