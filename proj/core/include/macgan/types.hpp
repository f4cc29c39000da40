#pragma once

#include <optional>
#include <vector>

#include "macgan/matrix.hpp"

namespace macgan {

enum class SampleSource { Real, Generated };

/// Column-per-sample representations Z (d x n) with provenance and optional
/// class labels.
struct FeatureBatch {
  Matrix data;
  SampleSource source = SampleSource::Real;
  std::optional<std::vector<int>> labels;

  FeatureBatch() = default;
  FeatureBatch(Matrix z, SampleSource src = SampleSource::Real,
               std::optional<std::vector<int>> lbl = std::nullopt);

  std::size_t dim() const noexcept { return data.rows(); }
  std::size_t count() const noexcept { return data.cols(); }
};

enum class RelationKind { SupervisedBlock, SelfSupervisedIdentity, Learned };

/// n x n pairwise relationship matrix C.
struct RelationMatrix {
  Matrix data;
  RelationKind kind = RelationKind::SupervisedBlock;

  std::size_t size() const noexcept { return data.rows(); }
};

}  // namespace macgan
