#include "macgan/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace macgan {
namespace {

constexpr std::size_t kCurveVertices = 1024;

std::array<double, 3> normalized(std::array<double, 3> a) {
  const double len = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {a[0] / len, a[1] / len, a[2] / len};
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

std::string_view to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::EightGaussians3D: return "eight_gaussians_3d";
    case DatasetKind::VortexLines: return "vortex_lines";
    case DatasetKind::SwissRoll: return "swiss_roll";
  }
  return "eight_gaussians_3d";
}

DatasetKind dataset_kind_from_string(std::string_view name) {
  for (DatasetKind k :
       {DatasetKind::EightGaussians3D, DatasetKind::VortexLines, DatasetKind::SwissRoll}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown dataset kind '" + std::string(name) + "'");
}

SyntheticDataset::SyntheticDataset(const DatasetSpec& spec) : spec_(spec) {
  if (!(spec_.sigma >= 0.0)) throw InputError("dataset sigma must be non-negative");
  switch (spec_.kind) {
    case DatasetKind::EightGaussians3D: {
      if (spec_.gaussian_modes == 0) throw InputError("gaussian_modes must be positive");
      normal_ = normalized({1.0, 2.0, 2.0});
      u_ = normalized({2.0, -1.0, 0.0});
      v_ = normalized(cross(normal_, u_));
      centers_ = Matrix(3, spec_.gaussian_modes);
      for (std::size_t k = 0; k < spec_.gaussian_modes; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(spec_.gaussian_modes);
        for (std::size_t r = 0; r < 3; ++r) {
          centers_(r, k) = spec_.radius * (std::cos(theta) * u_[r] + std::sin(theta) * v_[r]);
        }
      }
      break;
    }
    case DatasetKind::VortexLines:
    case DatasetKind::SwissRoll: {
      const std::size_t arms = spec_.kind == DatasetKind::VortexLines ? spec_.arms : 1;
      if (arms == 0) throw InputError("vortex arms must be positive");
      if (spec_.kind == DatasetKind::SwissRoll && spec_.roll_segments == 0) {
        throw InputError("roll_segments must be positive");
      }
      for (std::size_t a = 0; a < arms; ++a) {
        Curve c;
        const double offset = 2.0 * std::numbers::pi * static_cast<double>(a) /
                              static_cast<double>(arms);
        for (std::size_t i = 0; i < kCurveVertices; ++i) {
          const double t = static_cast<double>(i) / static_cast<double>(kCurveVertices - 1);
          const double r = spec_.inner_radius + (spec_.outer_radius - spec_.inner_radius) * t;
          const double theta = offset + 2.0 * std::numbers::pi * spec_.turns * t;
          c.x.push_back(r * std::cos(theta));
          c.y.push_back(r * std::sin(theta));
          c.arc.push_back(i == 0 ? 0.0
                                 : c.arc.back() + std::hypot(c.x[i] - c.x[i - 1],
                                                             c.y[i] - c.y[i - 1]));
        }
        curves_.push_back(std::move(c));
      }
      break;
    }
  }
}

std::size_t SyntheticDataset::dim() const noexcept {
  return spec_.kind == DatasetKind::VortexLines ? 2 : 3;
}

std::size_t SyntheticDataset::mode_count() const noexcept {
  switch (spec_.kind) {
    case DatasetKind::EightGaussians3D: return spec_.gaussian_modes;
    case DatasetKind::VortexLines: return spec_.arms;
    case DatasetKind::SwissRoll: return spec_.roll_segments;
  }
  return 0;
}

std::array<double, 2> SyntheticDataset::point_on_curve(const Curve& c, double s) const {
  const auto it = std::upper_bound(c.arc.begin(), c.arc.end(), s);
  std::size_t hi = static_cast<std::size_t>(it - c.arc.begin());
  hi = std::clamp<std::size_t>(hi, 1, c.arc.size() - 1);
  const std::size_t lo = hi - 1;
  const double span = c.arc[hi] - c.arc[lo];
  const double w = span > 0.0 ? (s - c.arc[lo]) / span : 0.0;
  return {c.x[lo] + w * (c.x[hi] - c.x[lo]), c.y[lo] + w * (c.y[hi] - c.y[lo])};
}

double SyntheticDataset::distance_to_polyline(const Curve& c, double px, double py) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < c.x.size(); ++i) {
    const double ax = c.x[i], ay = c.y[i];
    const double dx = c.x[i + 1] - ax, dy = c.y[i + 1] - ay;
    const double len_sq = dx * dx + dy * dy;
    double t = len_sq > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = ax + t * dx - px;
    const double ey = ay + t * dy - py;
    best = std::min(best, ex * ex + ey * ey);
  }
  return std::sqrt(best);
}

LabeledPoints SyntheticDataset::sample(std::size_t n, Rng& rng) const {
  LabeledPoints out{Matrix(dim(), n), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec_.kind) {
      case DatasetKind::EightGaussians3D: {
        const std::size_t k = rng.below(spec_.gaussian_modes);
        const double a = rng.normal() * spec_.sigma;
        const double b = rng.normal() * spec_.sigma;
        for (std::size_t r = 0; r < 3; ++r) out.points(r, i) = centers_(r, k) + a * u_[r] + b * v_[r];
        out.labels[i] = static_cast<int>(k);
        break;
      }
      case DatasetKind::VortexLines: {
        const std::size_t arm = rng.below(curves_.size());
        const Curve& c = curves_[arm];
        const auto p = point_on_curve(c, rng.uniform() * c.arc.back());
        out.points(0, i) = p[0] + rng.normal() * spec_.sigma;
        out.points(1, i) = p[1] + rng.normal() * spec_.sigma;
        out.labels[i] = static_cast<int>(arm);
        break;
      }
      case DatasetKind::SwissRoll: {
        const Curve& c = curves_.front();
        const double u = rng.uniform();
        const auto p = point_on_curve(c, u * c.arc.back());
        out.points(0, i) = p[0] + rng.normal() * spec_.sigma;
        out.points(1, i) = spec_.roll_height * rng.uniform();
        out.points(2, i) = p[1] + rng.normal() * spec_.sigma;
        out.labels[i] = static_cast<int>(
            std::min<std::size_t>(static_cast<std::size_t>(u * static_cast<double>(spec_.roll_segments)),
                                  spec_.roll_segments - 1));
        break;
      }
    }
  }
  return out;
}

double SyntheticDataset::distance_to_mode(std::span<const double> point, std::size_t m) const {
  if (point.size() != dim()) throw DimensionError("distance_to_mode: point has wrong dimension");
  if (m >= mode_count()) throw DimensionError("distance_to_mode: mode index out of range");
  switch (spec_.kind) {
    case DatasetKind::EightGaussians3D: {
      double sq = 0.0;
      for (std::size_t r = 0; r < 3; ++r) {
        const double diff = point[r] - centers_(r, m);
        sq += diff * diff;
      }
      return std::sqrt(sq);
    }
    case DatasetKind::VortexLines:
      return distance_to_polyline(curves_[m], point[0], point[1]);
    case DatasetKind::SwissRoll: {
      // Restrict to the m-th arc-length segment of the roll.
      const Curve& c = curves_.front();
      const double total = c.arc.back();
      const double lo = total * static_cast<double>(m) / static_cast<double>(spec_.roll_segments);
      const double hi = total * static_cast<double>(m + 1) / static_cast<double>(spec_.roll_segments);
      Curve piece;
      for (std::size_t i = 0; i < c.arc.size(); ++i) {
        if (c.arc[i] >= lo && c.arc[i] <= hi) {
          piece.x.push_back(c.x[i]);
          piece.y.push_back(c.y[i]);
          piece.arc.push_back(c.arc[i]);
        }
      }
      const double in_plane = distance_to_polyline(piece, point[0], point[2]);
      const double below = std::max(0.0, -point[1]);
      const double above = std::max(0.0, point[1] - spec_.roll_height);
      return std::hypot(in_plane, below + above);
    }
  }
  return std::numeric_limits<double>::infinity();
}

LabeledPoints sample_dataset(const SyntheticDataset& ds, std::size_t n, Rng& rng) {
  if (n == 0) throw InputError("sample_dataset: n must be positive");
  return ds.sample(n, rng);
}

}  // namespace macgan
