#include "macgan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace macgan {
namespace {

struct Projected {
  std::vector<double> x, y, off;  // off: distance from the mode plane
};

Projected project(const Matrix& pts, const SyntheticDataset& ds) {
  Projected p;
  const std::size_t n = pts.cols();
  p.x.resize(n);
  p.y.resize(n);
  p.off.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (ds.kind() == DatasetKind::EightGaussians3D) {
      const auto& u = ds.plane_u();
      const auto& v = ds.plane_v();
      const auto& nrm = ds.plane_normal();
      double pu = 0.0, pv = 0.0, pn = 0.0;
      for (std::size_t r = 0; r < 3; ++r) {
        pu += u[r] * pts(r, i);
        pv += v[r] * pts(r, i);
        pn += nrm[r] * pts(r, i);
      }
      p.x[i] = pu;
      p.y[i] = pv;
      p.off[i] = std::abs(pn);
    } else if (ds.kind() == DatasetKind::SwissRoll) {
      p.x[i] = pts(0, i);
      p.y[i] = pts(2, i);
    } else {
      p.x[i] = pts(0, i);
      p.y[i] = pts(1, i);
    }
  }
  return p;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string scatter_svg(const Matrix& real, const Matrix& generated, const SyntheticDataset& ds,
                        const std::string& title) {
  constexpr double kSize = 600.0;
  constexpr double kMargin = 30.0;
  const Projected pr = project(real, ds);
  const Projected pg = project(generated, ds);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Projected* p : {&pr, &pg}) {
    for (std::size_t i = 0; i < p->x.size(); ++i) {
      if (!std::isfinite(p->x[i]) || !std::isfinite(p->y[i])) continue;
      lo = std::min({lo, p->x[i], p->y[i]});
      hi = std::max({hi, p->x[i], p->y[i]});
    }
  }
  if (!(hi > lo)) {
    lo = -1.0;
    hi = 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double scale = (kSize - 2 * kMargin) / (hi - lo);
  auto sx = [&](double x) { return kMargin + (x - lo) * scale; };
  auto sy = [&](double y) { return kSize - kMargin - (y - lo) * scale; };
  // Off-plane distance at which generated points turn fully red.
  const double off_full = std::max(3.0 * ds.sigma(), 1e-9);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << kMargin << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
        << title << "</text>\n";
  }
  out << "<g fill=\"#999999\" fill-opacity=\"0.5\">\n";
  for (std::size_t i = 0; i < pr.x.size(); ++i) {
    if (!std::isfinite(pr.x[i]) || !std::isfinite(pr.y[i])) continue;
    out << "<circle cx=\"" << fmt(sx(pr.x[i])) << "\" cy=\"" << fmt(sy(pr.y[i]))
        << "\" r=\"1.5\"/>\n";
  }
  out << "</g>\n<g fill-opacity=\"0.6\">\n";
  for (std::size_t i = 0; i < pg.x.size(); ++i) {
    if (!std::isfinite(pg.x[i]) || !std::isfinite(pg.y[i])) continue;
    const double t = std::clamp(pg.off[i] / off_full, 0.0, 1.0);
    const int red = static_cast<int>(std::lround(40 + 215 * t));
    const int blue = static_cast<int>(std::lround(220 * (1.0 - t)));
    out << "<circle cx=\"" << fmt(sx(pg.x[i])) << "\" cy=\"" << fmt(sy(pg.y[i]))
        << "\" r=\"1.5\" fill=\"rgb(" << red << ",60," << blue << ")\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

void write_scatter_svg(const std::filesystem::path& path, const Matrix& real,
                       const Matrix& generated, const SyntheticDataset& ds,
                       const std::string& title) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << scatter_svg(real, generated, ds, title);
}

}  // namespace macgan
