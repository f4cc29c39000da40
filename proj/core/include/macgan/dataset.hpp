#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "macgan/rng.hpp"

namespace macgan {

enum class DatasetKind { EightGaussians3D, VortexLines, SwissRoll };

std::string_view to_string(DatasetKind k);
DatasetKind dataset_kind_from_string(std::string_view name);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::EightGaussians3D;
  // EightGaussians3D
  std::size_t gaussian_modes = 8;
  double radius = 2.0;
  // Per-mode std for the Gaussians; off-curve noise std for the curve datasets.
  double sigma = 0.05;
  // VortexLines
  std::size_t arms = 3;
  double inner_radius = 0.5;
  double outer_radius = 2.0;
  double turns = 1.5;
  // SwissRoll: roll in the x/z plane, uniform height along y.
  double roll_height = 2.0;
  std::size_t roll_segments = 4;
};

struct LabeledPoints {
  Matrix points;  // dim x n
  std::vector<int> labels;
};

/// Synthetic multi-mode manifolds used by the toy experiments.
///
/// EightGaussians3D: centers evenly spaced on a circle of `radius` inside the
/// plane through the origin spanned by two fixed orthonormal vectors of R^3;
/// each mode is an isotropic in-plane Gaussian of std `sigma`.
///
/// VortexLines: `arms` Archimedean spirals in R^2 offset by 2 pi / arms, radius
/// growing from inner to outer over `turns` turns, sampled uniformly in arc
/// length with isotropic noise `sigma`.
///
/// SwissRoll: a single spiral of the same shape in the x/z plane extruded
/// along y, with modes given by `roll_segments` equal-arc-length pieces.
class SyntheticDataset {
 public:
  explicit SyntheticDataset(const DatasetSpec& spec);

  const DatasetSpec& spec() const noexcept { return spec_; }
  DatasetKind kind() const noexcept { return spec_.kind; }
  std::size_t dim() const noexcept;
  std::size_t mode_count() const noexcept;
  double sigma() const noexcept { return spec_.sigma; }

  LabeledPoints sample(std::size_t n, Rng& rng) const;

  /// EightGaussians3D only.
  const Matrix& centers() const noexcept { return centers_; }
  const std::array<double, 3>& plane_u() const noexcept { return u_; }
  const std::array<double, 3>& plane_v() const noexcept { return v_; }
  const std::array<double, 3>& plane_normal() const noexcept { return normal_; }

  /// Distance from `point` (length dim()) to mode m: Euclidean distance to the
  /// center for Gaussians, distance to the noise-free curve (or surface) for
  /// the curve datasets.
  double distance_to_mode(std::span<const double> point, std::size_t m) const;

 private:
  struct Curve {
    std::vector<double> x, y;   // polyline vertices
    std::vector<double> arc;    // cumulative arc length at each vertex
  };

  std::array<double, 2> point_on_curve(const Curve& c, double s) const;
  static double distance_to_polyline(const Curve& c, double px, double py);

  DatasetSpec spec_;
  Matrix centers_;
  std::array<double, 3> u_{}, v_{}, normal_{};
  std::vector<Curve> curves_;
};

LabeledPoints sample_dataset(const SyntheticDataset& ds, std::size_t n, Rng& rng);

}  // namespace macgan
