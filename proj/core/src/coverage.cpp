#include "macgan/coverage.hpp"

#include <limits>

namespace macgan {

CoverageReport mode_coverage(const Matrix& samples, const SyntheticDataset& ds,
                             double threshold_sigma, double min_fraction) {
  if (samples.cols() == 0) throw InputError("mode_coverage: no samples");
  if (samples.rows() != ds.dim()) {
    throw DimensionError("mode_coverage: samples have dimension " +
                         std::to_string(samples.rows()) + ", dataset has " +
                         std::to_string(ds.dim()));
  }
  const std::size_t modes = ds.mode_count();
  const std::size_t n = samples.cols();
  const double radius = threshold_sigma * ds.sigma();

  CoverageReport report;
  report.per_mode_fraction.assign(modes, 0.0);
  report.nearest_mode.resize(n);
  std::vector<std::size_t> near_count(modes, 0);
  std::size_t near_total = 0;
  std::vector<double> point(ds.dim());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < ds.dim(); ++r) point[r] = samples(r, i);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_mode = 0;
    for (std::size_t m = 0; m < modes; ++m) {
      const double dist = ds.distance_to_mode(point, m);
      if (dist < best) {
        best = dist;
        best_mode = m;
      }
    }
    report.nearest_mode[i] = static_cast<int>(best_mode);
    if (best <= radius) {
      ++near_count[best_mode];
      ++near_total;
    }
  }
  for (std::size_t m = 0; m < modes; ++m) {
    report.per_mode_fraction[m] = static_cast<double>(near_count[m]) / static_cast<double>(n);
    if (report.per_mode_fraction[m] >= min_fraction) ++report.covered;
  }
  report.high_quality_fraction = static_cast<double>(near_total) / static_cast<double>(n);
  return report;
}

}  // namespace macgan
