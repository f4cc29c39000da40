#pragma once

#include <vector>

#include "macgan/dataset.hpp"

namespace macgan {

struct CoverageReport {
  std::size_t covered = 0;
  std::vector<double> per_mode_fraction;  // share of all samples near each mode
  double high_quality_fraction = 0.0;     // share of samples near any mode
  std::vector<int> nearest_mode;          // per sample
};

/// Assigns every sample to its nearest mode. A sample is "near" when its
/// distance to that mode is at most threshold_sigma * ds.sigma(); a mode is
/// covered when at least min_fraction of all samples are near it.
CoverageReport mode_coverage(const Matrix& samples, const SyntheticDataset& ds,
                             double threshold_sigma, double min_fraction);

}  // namespace macgan
