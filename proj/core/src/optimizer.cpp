#include "macgan/optimizer.hpp"

#include <cmath>

namespace macgan {

Adam::Adam(const AdamConfig& config, const MlpNetwork& net) : config_(config) {
  for (const Layer& l : net.layers()) {
    m_weight_.emplace_back(l.out(), l.in());
    v_weight_.emplace_back(l.out(), l.in());
    m_bias_.emplace_back(l.out(), 1);
    v_bias_.emplace_back(l.out(), 1);
  }
}

void Adam::update(Matrix& param, Matrix& m, Matrix& v, const Matrix& g, double c1,
                  double c2) const {
  auto p = param.values();
  auto mv = m.values();
  auto vv = v.values();
  const auto gv = g.values();
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  for (std::size_t i = 0; i < p.size(); ++i) {
    mv[i] = b1 * mv[i] + (1.0 - b1) * gv[i];
    vv[i] = b2 * vv[i] + (1.0 - b2) * gv[i] * gv[i];
    const double m_hat = mv[i] / c1;
    const double v_hat = vv[i] / c2;
    p[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

StepStatus Adam::step(MlpNetwork& net, const Gradients& grads) {
  auto& layers = net.mutable_layers();
  if (grads.weight.size() != layers.size() || grads.bias.size() != layers.size()) {
    throw DimensionError("Adam::step: gradient layer count does not match network");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (grads.weight[l].rows() != layers[l].weight.rows() ||
        grads.weight[l].cols() != layers[l].weight.cols() ||
        grads.bias[l].rows() != layers[l].bias.rows()) {
      throw DimensionError("Adam::step: gradient shape mismatch at layer " + std::to_string(l));
    }
    if (!grads.weight[l].all_finite() || !grads.bias[l].all_finite()) {
      return StepStatus::SkippedNonFinite;
    }
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weight, m_weight_[l], v_weight_[l], grads.weight[l], c1, c2);
    update(layers[l].bias, m_bias_[l], v_bias_[l], grads.bias[l], c1, c2);
  }
  return StepStatus::Applied;
}

}  // namespace macgan
