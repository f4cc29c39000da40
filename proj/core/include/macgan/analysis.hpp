#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "macgan/matrix.hpp"

namespace macgan {

/// Grayscale image with intensities in [0, 1], stored row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, double fill = 0.0);
  /// Takes a height x width pixel matrix; throws InputError for values
  /// outside [0, 1] or non-finite values.
  static GrayImage from_matrix(const Matrix& pixels);

  std::size_t width() const noexcept { return pixels_.cols(); }
  std::size_t height() const noexcept { return pixels_.rows(); }
  const Matrix& pixels() const noexcept { return pixels_; }

  double at(std::size_t x, std::size_t y) const noexcept { return pixels_(y, x); }
  void set(std::size_t x, std::size_t y, double v);

 private:
  Matrix pixels_;
};

/// Portable graymap, ASCII (P2) or binary (P5), 8 or 16 bit. Intensities are
/// divided by maxval.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img, unsigned maxval = 255);

/// Raw pixel matrix: one image row per CSV line, values in [0, 1].
GrayImage read_csv_image(const std::filesystem::path& path);
void write_csv_image(const std::filesystem::path& path, const GrayImage& img);

/// Every .pgm and .csv file directly inside `dir`, in file-name order.
/// Throws InputError when the directory is missing or holds no images; a
/// malformed file is named in the message.
std::vector<GrayImage> load_image_directory(const std::filesystem::path& dir);

/// Pixelwise mean. Throws InputError for an empty list, DimensionError on
/// differing sizes.
GrayImage average_image(const std::vector<GrayImage>& images);

struct SpectrumReport {
  std::vector<double> sigma;                   // non-increasing
  std::vector<std::optional<double>> log_sigma;  // absent for exact zeros
  double energy_q = 0.95;
  std::size_t effective_rank = 0;
};

/// Smallest k with sum_{i<=k} sigma_i^2 >= q * sum sigma_i^2 (1 for an all-zero
/// spectrum). Requires 0 < q <= 1.
std::size_t effective_rank(const std::vector<double>& sigma, double q);

/// Singular spectrum of a pixel matrix. With `center`, the mean intensity is
/// subtracted from every pixel first.
SpectrumReport spectrum(const Matrix& pixels, double energy_q = 0.95, bool center = false);
SpectrumReport spectrum(const GrayImage& img, double energy_q = 0.95, bool center = false);

/// Writes index, sigma, log_sigma (log_sigma empty where absent).
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumReport& r);

struct IndexComparison {
  std::size_t index = 0;
  std::optional<double> sigma_a;
  std::optional<double> sigma_b;
  char winner = '=';  // 'a', 'b' or '=' (tie)
};

struct SpectrumComparison {
  std::vector<IndexComparison> per_index;
  std::size_t a_larger = 0;
  std::size_t b_larger = 0;
  std::size_t ties = 0;
  std::size_t effective_rank_a = 0;
  std::size_t effective_rank_b = 0;
};

/// Index-wise comparison; the shorter spectrum is padded with absent values.
/// Values within 1e-12 relative of each other count as ties.
SpectrumComparison compare_spectra(const SpectrumReport& a, const SpectrumReport& b);

/// comparison.csv (per index) and comparison_summary.csv in `dir`.
void write_comparison_csv(const std::filesystem::path& dir, const SpectrumComparison& c);

}  // namespace macgan
