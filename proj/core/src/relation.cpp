#include "macgan/relation.hpp"

#include <cmath>
#include <string>

namespace macgan {

RelationMatrix supervised_relation(std::span<const int> labels) {
  if (labels.empty()) throw InputError("supervised_relation: empty label list");
  const std::size_t n = labels.size();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = labels[i] == labels[j] ? 1.0 : 0.0;
  }
  return RelationMatrix{std::move(c), RelationKind::SupervisedBlock};
}

RelationMatrix identity_relation(std::size_t n) {
  return RelationMatrix{Matrix::identity(n), RelationKind::SelfSupervisedIdentity};
}

PriorRelation prior_relation(const FeatureBatch& embeddings, double tau, KernelSign sign) {
  if (!(tau > 0.0)) throw InputError("prior_relation: tau must be positive");
  const Matrix& z = embeddings.data;
  const std::size_t n = z.cols();
  if (n < 2) throw InputError("prior_relation: need at least two samples");
  if (!z.all_finite()) throw NumericalError("prior_relation: non-finite embeddings");

  Matrix k(n, n);
  const double s = sign == KernelSign::Negative ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Direct differences; the Gram expansion loses rotation invariance to rounding.
      double dist = 0.0;
      for (std::size_t r = 0; r < z.rows(); ++r) {
        const double diff = z(r, i) - z(r, j);
        dist += diff * diff;
      }
      k(i, j) = std::exp(s * dist / tau);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto row = k.row(i);
    double sum = 0.0;
    for (double v : row) sum += v;
    if (!std::isfinite(sum) || !(sum > 0.0)) {
      throw NumericalError("prior_relation: kernel row " + std::to_string(i) +
                           " is not normalizable (overflow or underflow)");
    }
    for (double& v : row) v /= sum;
  }
  return PriorRelation{std::move(k)};
}

PriorEncoder PriorEncoder::identity() { return PriorEncoder{}; }

PriorEncoder PriorEncoder::random_projection(std::size_t in, std::size_t out,
                                             std::uint64_t seed) {
  PriorEncoder enc;
  Rng rng(seed);
  enc.impl_ = Projection{random_normal(out, in, rng, 1.0 / std::sqrt(static_cast<double>(out)))};
  enc.seed_ = seed;
  return enc;
}

PriorEncoder PriorEncoder::frozen_mlp(MlpNetwork net) {
  PriorEncoder enc;
  enc.impl_ = std::move(net);
  return enc;
}

Matrix PriorEncoder::encode(const Matrix& x) const {
  if (std::holds_alternative<Projection>(impl_)) {
    return matmul(std::get<Projection>(impl_).weight, x);
  }
  if (std::holds_alternative<MlpNetwork>(impl_)) {
    return std::get<MlpNetwork>(impl_).predict(x);
  }
  return x;
}

MlpNetwork build_relation_net(std::size_t feature_dim, std::size_t hidden_width, Rng& rng) {
  const std::size_t widths[] = {2 * feature_dim, hidden_width, hidden_width, 1};
  return MlpNetwork::build(widths, Activation::ReLU, Activation::Logistic, rng);
}

RelationMatrix relation_forward(MlpNetwork& f, const FeatureBatch& z) {
  const std::size_t d = z.dim();
  const std::size_t n = z.count();
  if (f.input_width() != 2 * d) {
    throw DimensionError("relation_forward: network takes " + std::to_string(f.input_width()) +
                         " inputs, pairs have " + std::to_string(2 * d));
  }
  if (f.output_width() != 1) throw DimensionError("relation_forward: network must emit a scalar");

  Matrix pairs(2 * d, n * n);
  for (std::size_t r = 0; r < d; ++r) {
    const auto zr = z.data.row(r);
    auto top = pairs.row(r);
    auto bottom = pairs.row(d + r);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        top[i * n + j] = zr[i];
        bottom[i * n + j] = zr[j];
      }
    }
  }
  const Matrix& scores = f.forward(pairs);

  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (scores(0, i * n + j) + scores(0, j * n + i));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return RelationMatrix{std::move(c), RelationKind::Learned};
}

RelationLossResult relation_loss(const RelationMatrix& c_learned, const PriorRelation& prior,
                                 double beta) {
  const Matrix& c = c_learned.data;
  const Matrix& p = prior.data;
  if (c.rows() != p.rows() || c.cols() != p.cols()) {
    throw DimensionError("relation_loss: learned and prior relation sizes differ");
  }
  RelationLossResult out;
  Matrix diff = p - c;
  out.value = beta * frobenius_sq(diff);
  diff *= -2.0 * beta;
  out.grad = std::move(diff);
  return out;
}

Gradients relation_backward(const MlpNetwork& f, const Matrix& grad_c, Matrix* grad_z) {
  const std::size_t n = grad_c.rows();
  if (!grad_c.is_square()) throw DimensionError("relation_backward: dL/dC must be square");
  const Matrix& scores = f.output();
  if (scores.cols() != n * n) {
    throw DimensionError("relation_backward: cached forward pass has a different batch size");
  }
  Matrix upstream(1, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) upstream(0, i * n + j) = 0.5 * (grad_c(i, j) + grad_c(j, i));
    }
  }
  Gradients g = f.backward(upstream, true);
  if (grad_z) {
    const std::size_t d = f.input_width() / 2;
    Matrix dz(d, n);
    for (std::size_t r = 0; r < d; ++r) {
      const auto top = g.input.row(r);
      const auto bottom = g.input.row(d + r);
      auto out = dz.row(r);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          out[i] += top[i * n + j];
          out[j] += bottom[i * n + j];
        }
      }
    }
    *grad_z = std::move(dz);
  }
  return g;
}

}  // namespace macgan
