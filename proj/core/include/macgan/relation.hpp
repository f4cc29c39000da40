#pragma once

#include <span>
#include <variant>

#include "macgan/mlp.hpp"
#include "macgan/types.hpp"

namespace macgan {

/// Row-stochastic kernel prior C^pro built from prior embeddings.
struct PriorRelation {
  Matrix data;
};

/// Sign of the exponent in the prior kernel. Negative is the Gaussian affinity
/// exp(-||a - b||^2 / tau); Positive is exp(+||a - b||^2 / tau), which grows
/// with distance and overflows for moderate inputs.
enum class KernelSign { Negative, Positive };

/// C(i,j) = 1 iff labels[i] == labels[j].
RelationMatrix supervised_relation(std::span<const int> labels);

/// Every sample is its own class: C = I.
RelationMatrix identity_relation(std::size_t n);

/// Kernel affinities between the columns of `embeddings`, each row divided by
/// its sum. Requires tau > 0 and at least two samples.
PriorRelation prior_relation(const FeatureBatch& embeddings, double tau,
                             KernelSign sign = KernelSign::Negative);

/// Frozen map from raw samples to prior embeddings.
class PriorEncoder {
 public:
  static PriorEncoder identity();
  /// Fixed Gaussian projection in -> out, entries N(0, 1/out), drawn from `seed`.
  static PriorEncoder random_projection(std::size_t in, std::size_t out, std::uint64_t seed);
  static PriorEncoder frozen_mlp(MlpNetwork net);

  Matrix encode(const Matrix& x) const;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  struct Identity {};
  struct Projection {
    Matrix weight;
  };
  std::variant<Identity, Projection, MlpNetwork> impl_;
  std::uint64_t seed_ = 0;
};

/// Three-layer relation network 2d -> h1 -> h2 -> 1 (ReLU hidden, logistic
/// output) scoring the concatenated pair [z_i ; z_j].
MlpNetwork build_relation_net(std::size_t feature_dim, std::size_t hidden_width, Rng& rng);

/// Evaluates F on all n^2 ordered pairs, symmetrizes as (F + F^T)/2 and sets
/// the diagonal to 1. Leaves F's cache populated for relation_backward.
RelationMatrix relation_forward(MlpNetwork& f, const FeatureBatch& z);

struct RelationLossResult {
  double value = 0.0;
  Matrix grad;  // dL/dC_learned
};

/// beta * ||C^pro - C||_F^2 and its gradient -2 beta (C^pro - C).
RelationLossResult relation_loss(const RelationMatrix& c_learned, const PriorRelation& prior,
                                 double beta);

/// Backpropagates dL/dC through the symmetrization and the pair network.
/// The diagonal of dL/dC is ignored (it is forced to 1). When `grad_z` is
/// non-null it receives dL/dZ (d x n).
Gradients relation_backward(const MlpNetwork& f, const Matrix& grad_c, Matrix* grad_z = nullptr);

}  // namespace macgan
