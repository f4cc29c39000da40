#include "macgan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "macgan/csv.hpp"
#include "macgan/decompositions.hpp"

namespace macgan {
namespace {

void check_intensity(double v, const std::string& where) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw InputError(where + ": intensity " + format_double(v) + " outside [0, 1]");
  }
}

// Reads the next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in, const std::string& name) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(c);
  }
  if (tok.empty()) throw InputError(name + ": truncated PGM header");
  return tok;
}

std::size_t pgm_number(std::istream& in, const std::string& name) {
  const std::string tok = pgm_token(in, name);
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size()) throw InputError(name + ": bad PGM header field '" + tok + "'");
  return v;
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, double fill)
    : pixels_(height, width, fill) {
  check_intensity(fill, "GrayImage");
}

GrayImage GrayImage::from_matrix(const Matrix& pixels) {
  for (double v : pixels.values()) check_intensity(v, "GrayImage");
  GrayImage img;
  img.pixels_ = pixels;
  return img;
}

void GrayImage::set(std::size_t x, std::size_t y, double v) {
  check_intensity(v, "GrayImage::set");
  pixels_(y, x) = v;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::string name = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + name);
  const std::string magic = pgm_token(in, name);
  if (magic != "P2" && magic != "P5") throw InputError(name + ": not a P2/P5 graymap");
  const std::size_t width = pgm_number(in, name);
  const std::size_t height = pgm_number(in, name);
  const std::size_t maxval = pgm_number(in, name);
  if (width == 0 || height == 0) throw InputError(name + ": empty image");
  if (maxval == 0 || maxval > 65535) throw InputError(name + ": maxval out of range");

  Matrix px(height, width);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (double& v : px.values()) {
      const std::size_t raw = pgm_number(in, name);
      if (raw > maxval) throw InputError(name + ": sample exceeds maxval");
      v = static_cast<double>(raw) * scale;
    }
  } else {
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> buf(width * height * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
      throw InputError(name + ": truncated pixel data");
    }
    auto values = px.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::size_t raw = bytes == 1 ? buf[i] : (std::size_t{buf[2 * i]} << 8) | buf[2 * i + 1];
      if (raw > maxval) throw InputError(name + ": sample exceeds maxval");
      values[i] = static_cast<double>(raw) * scale;
    }
  }
  return GrayImage::from_matrix(px);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img, unsigned maxval) {
  if (maxval == 0 || maxval > 65535) throw InputError("write_pgm: maxval out of range");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
  for (double v : img.pixels().values()) {
    const auto raw = static_cast<unsigned>(std::lround(v * maxval));
    if (maxval < 256) {
      out.put(static_cast<char>(raw));
    } else {
      out.put(static_cast<char>(raw >> 8));
      out.put(static_cast<char>(raw & 0xff));
    }
  }
}

GrayImage read_csv_image(const std::filesystem::path& path) {
  const Matrix px = read_matrix_csv(path);
  if (px.empty()) throw InputError(path.string() + ": empty image");
  try {
    return GrayImage::from_matrix(px);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_csv_image(const std::filesystem::path& path, const GrayImage& img) {
  write_matrix_csv(path, img.pixels());
}

std::vector<GrayImage> load_image_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".pgm" || ext == ".csv") files.push_back(entry.path());
  }
  if (files.empty()) throw InputError(dir.string() + ": no .pgm or .csv images");
  std::sort(files.begin(), files.end());
  std::vector<GrayImage> images;
  images.reserve(files.size());
  for (const auto& f : files) {
    images.push_back(f.extension() == ".pgm" ? read_pgm(f) : read_csv_image(f));
  }
  return images;
}

GrayImage average_image(const std::vector<GrayImage>& images) {
  if (images.empty()) throw InputError("average_image: no images");
  Matrix sum(images.front().height(), images.front().width());
  for (const GrayImage& img : images) {
    if (img.width() != sum.cols() || img.height() != sum.rows()) {
      throw DimensionError("average_image: images differ in size");
    }
    sum += img.pixels();
  }
  sum *= 1.0 / static_cast<double>(images.size());
  // Rounding can push a mean of ones a hair above 1.
  for (double& v : sum.values()) v = std::clamp(v, 0.0, 1.0);
  return GrayImage::from_matrix(sum);
}

std::size_t effective_rank(const std::vector<double>& sigma, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw InputError("energy_q must lie in (0, 1]");
  if (sigma.empty()) throw DimensionError("effective_rank: empty spectrum");
  double total = 0.0;
  for (double s : sigma) total += s * s;
  if (total == 0.0) return 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    acc += sigma[k] * sigma[k];
    if (acc >= q * total) return k + 1;
  }
  // Summation order can leave acc a few ulps short of q * total when q = 1.
  return sigma.size();
}

SpectrumReport spectrum(const Matrix& pixels, double energy_q, bool center) {
  if (!(energy_q > 0.0 && energy_q <= 1.0)) throw InputError("energy_q must lie in (0, 1]");
  Matrix a = pixels;
  if (center) {
    long double total = 0.0L;
    for (double v : a.values()) total += v;
    const double mean = static_cast<double>(total / static_cast<long double>(a.size()));
    for (double& v : a.values()) v -= mean;
  }
  SpectrumReport r;
  r.energy_q = energy_q;
  r.sigma = svd_values(a);
  r.log_sigma.reserve(r.sigma.size());
  for (double s : r.sigma) {
    r.log_sigma.push_back(s > 0.0 ? std::optional<double>(std::log(s)) : std::nullopt);
  }
  r.effective_rank = effective_rank(r.sigma, energy_q);
  return r;
}

SpectrumReport spectrum(const GrayImage& img, double energy_q, bool center) {
  return spectrum(img.pixels(), energy_q, center);
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumReport& r) {
  CsvWriter csv(path, {"index", "sigma", "log_sigma"});
  for (std::size_t i = 0; i < r.sigma.size(); ++i) {
    csv.field(i + 1).field(r.sigma[i]);
    if (r.log_sigma[i]) {
      csv.field(*r.log_sigma[i]);
    } else {
      csv.empty_field();
    }
    csv.end_row();
  }
}

SpectrumComparison compare_spectra(const SpectrumReport& a, const SpectrumReport& b) {
  constexpr double kTieTolerance = 1e-12;
  SpectrumComparison c;
  c.effective_rank_a = a.effective_rank;
  c.effective_rank_b = b.effective_rank;
  const std::size_t len = std::max(a.sigma.size(), b.sigma.size());
  for (std::size_t i = 0; i < len; ++i) {
    IndexComparison row;
    row.index = i + 1;
    if (i < a.sigma.size()) row.sigma_a = a.sigma[i];
    if (i < b.sigma.size()) row.sigma_b = b.sigma[i];
    if (row.sigma_a && row.sigma_b) {
      const double x = *row.sigma_a;
      const double y = *row.sigma_b;
      if (std::abs(x - y) <= kTieTolerance * std::max(std::abs(x), std::abs(y))) {
        row.winner = '=';
      } else {
        row.winner = x > y ? 'a' : 'b';
      }
    } else {
      row.winner = row.sigma_a ? 'a' : 'b';
    }
    if (row.winner == 'a') ++c.a_larger;
    else if (row.winner == 'b') ++c.b_larger;
    else ++c.ties;
    c.per_index.push_back(row);
  }
  return c;
}

void write_comparison_csv(const std::filesystem::path& dir, const SpectrumComparison& c) {
  {
    CsvWriter csv(dir / "comparison.csv", {"index", "sigma_a", "sigma_b", "winner"});
    for (const IndexComparison& row : c.per_index) {
      csv.field(row.index);
      if (row.sigma_a) csv.field(*row.sigma_a); else csv.empty_field();
      if (row.sigma_b) csv.field(*row.sigma_b); else csv.empty_field();
      csv.field(row.winner == '=' ? std::string("tie") : std::string(1, row.winner));
      csv.end_row();
    }
  }
  CsvWriter csv(dir / "comparison_summary.csv",
                {"a_larger", "b_larger", "ties", "effective_rank_a", "effective_rank_b",
                 "lower_effective_rank"});
  const std::string lower = c.effective_rank_a < c.effective_rank_b   ? "a"
                            : c.effective_rank_b < c.effective_rank_a ? "b"
                                                                      : "tie";
  csv.field(c.a_larger)
      .field(c.b_larger)
      .field(c.ties)
      .field(c.effective_rank_a)
      .field(c.effective_rank_b)
      .field(lower)
      .end_row();
}

}  // namespace macgan
