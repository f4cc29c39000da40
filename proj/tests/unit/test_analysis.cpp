#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "macgan/analysis.hpp"

using namespace macgan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / "macgan_unit" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// U diag(sigma) V^T with orthonormal factors, so the spectrum is known exactly.
Matrix with_spectrum(std::size_t h, std::size_t w, const std::vector<double>& sigma, Rng& rng) {
  const std::size_t k = sigma.size();
  Matrix u = oracle::orthonormal_columns(h, k, rng);
  const Matrix v = oracle::orthonormal_columns(w, k, rng);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < k; ++j) u(i, j) *= sigma[j];
  }
  return oracle::naive_matmul(u, v.transposed());
}

GrayImage constant(std::size_t w, std::size_t h, double v) { return GrayImage(w, h, v); }

}  // namespace

TEST_CASE("GrayImage validation") {
  GrayImage img(3, 2);
  CHECK(img.width() == 3);
  CHECK(img.height() == 2);
  img.set(2, 1, 0.75);
  CHECK(img.at(2, 1) == 0.75);
  CHECK(img.pixels()(1, 2) == 0.75);
  CHECK_THROWS_AS(img.set(0, 0, 1.5), InputError);
  CHECK_THROWS_AS(GrayImage::from_matrix(Matrix::from_rows({{0.5, -0.1}})), InputError);
  CHECK_THROWS_AS(GrayImage::from_matrix(Matrix::from_rows({{std::nan("")}})), InputError);
}

TEST_CASE("average_image examples") {
  Rng rng(1);
  const GrayImage a = GrayImage::from_matrix(random_uniform(4, 5, rng, 0.0, 1.0));
  CHECK(average_image({a}).pixels() == a.pixels());

  const GrayImage neg = GrayImage::from_matrix(Matrix(4, 5, 1.0) - a.pixels());
  const GrayImage half = average_image({a, neg});
  for (double v : half.pixels().values()) CHECK(v == doctest::Approx(0.5));

  const GrayImage m = average_image({constant(3, 3, 0.0), constant(3, 3, 0.3), constant(3, 3, 0.9)});
  for (double v : m.pixels().values()) CHECK(v == doctest::Approx(0.4));

  CHECK_THROWS_AS(average_image({}), InputError);
  CHECK_THROWS_AS(average_image({constant(3, 3, 0), constant(3, 4, 0)}), DimensionError);
}

TEST_CASE("average_image commutes with affine maps") {
  Rng rng(2);
  std::vector<GrayImage> imgs, mapped;
  for (int i = 0; i < 4; ++i) {
    imgs.push_back(GrayImage::from_matrix(random_uniform(6, 5, rng, 0.0, 1.0)));
    mapped.push_back(GrayImage::from_matrix(imgs.back().pixels() * 0.5 + Matrix(6, 5, 0.25)));
  }
  const Matrix lhs = average_image(mapped).pixels();
  const Matrix rhs = average_image(imgs).pixels() * 0.5 + Matrix(6, 5, 0.25);
  CHECK(max_abs(lhs - rhs) < 1e-15);
}

TEST_CASE("effective_rank") {
  CHECK(effective_rank({3, 4}, 0.5) == 2);
  CHECK(effective_rank({4, 3}, 0.5) == 1);
  CHECK(effective_rank({4, 3}, 1.0) == 2);
  CHECK(effective_rank({0, 0, 0}, 0.9) == 1);
  CHECK_THROWS_AS(effective_rank({1}, 0.0), InputError);
  CHECK_THROWS_AS(effective_rank({1}, 1.5), InputError);
}

TEST_CASE("spectrum examples") {
  const SpectrumReport c = spectrum(constant(7, 5, 0.6));
  CHECK(c.sigma.size() == 5);
  CHECK(c.sigma[0] == doctest::Approx(0.6 * std::sqrt(35.0)));
  for (std::size_t i = 1; i < c.sigma.size(); ++i) CHECK(c.sigma[i] < 1e-12);
  for (double q : {0.5, 0.95, 1.0}) CHECK(spectrum(constant(7, 5, 0.6), q).effective_rank == 1);
  CHECK(c.log_sigma[0].has_value());

  const SpectrumReport centered = spectrum(constant(4, 4, 0.6), 0.95, true);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(centered.sigma[i] == 0.0);
    CHECK_FALSE(centered.log_sigma[i].has_value());
  }
  CHECK(centered.effective_rank == 1);

  Rng rng(3);
  const std::vector<double> want{5, 4, 3, 2, 1};
  const Matrix low = with_spectrum(40, 30, want, rng);
  const SpectrumReport r = spectrum(low, 0.999);
  for (std::size_t i = 0; i < 5; ++i) CHECK(r.sigma[i] == doctest::Approx(want[i]).epsilon(1e-10));
  for (std::size_t i = 5; i < r.sigma.size(); ++i) CHECK(r.sigma[i] < 1e-10 * r.sigma[0]);
  CHECK(r.effective_rank == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(*r.log_sigma[i] == doctest::Approx(std::log(want[i])));
}

TEST_CASE("spectrum properties") {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const Matrix m = random_uniform(3 + rng.below(20), 3 + rng.below(20), rng, 0.0, 1.0);
    const SpectrumReport r = spectrum(m);
    const SpectrumReport rt = spectrum(m.transposed());
    REQUIRE(r.sigma.size() == rt.sigma.size());
    for (std::size_t i = 0; i < r.sigma.size(); ++i) {
      CHECK(std::abs(r.sigma[i] - rt.sigma[i]) <= 1e-10);
      if (i > 0) CHECK(r.sigma[i] <= r.sigma[i - 1]);
    }
    for (double s : {0.01, 0.5, 3.0}) {
      const SpectrumReport rs = spectrum(m * s);
      CHECK(rs.effective_rank == r.effective_rank);
      CHECK(rs.sigma[0] == doctest::Approx(s * r.sigma[0]));
    }
  }

  // Low rank plus small noise concentrates more energy than plain noise.
  const Matrix noise = random_uniform(60, 60, rng, 0.0, 1.0) - Matrix(60, 60, 0.5);
  Matrix structured = with_spectrum(60, 60, {10, 8, 6}, rng);
  structured.add_scaled(random_normal(60, 60, rng), 0.01);
  CHECK(spectrum(structured).effective_rank < spectrum(noise, 0.95, true).effective_rank);
}

TEST_CASE("compare_spectra examples") {
  Rng rng(5);
  const SpectrumReport a = spectrum(with_spectrum(30, 30, {3, 2, 1, 0.5, 0.25}, rng), 0.999);
  const SpectrumComparison same = compare_spectra(a, a);
  CHECK(same.ties == a.sigma.size());
  CHECK(same.a_larger == 0);
  CHECK(same.b_larger == 0);

  std::vector<double> fifty;
  for (int i = 0; i < 50; ++i) fifty.push_back(2.0 - 0.02 * i);
  const SpectrumReport b = spectrum(with_spectrum(60, 55, fifty, rng), 0.999);
  const SpectrumComparison ab = compare_spectra(a, b);
  CHECK(ab.effective_rank_a == 5);
  CHECK(ab.effective_rank_b >= 45);
  CHECK(ab.per_index.size() == 55);
  CHECK_FALSE(ab.per_index.back().sigma_a.has_value());
  CHECK(ab.per_index.back().winner == 'b');

  const Matrix m = with_spectrum(20, 20, {1, 0.5}, rng);
  const SpectrumReport doubled = spectrum(m * 2.0);
  const SpectrumReport base = spectrum(m);
  CHECK(doubled.effective_rank == base.effective_rank);
  CHECK(doubled.sigma[1] == doctest::Approx(2 * base.sigma[1]));

  const fs::path dir = scratch("compare");
  write_comparison_csv(dir, ab);
  CHECK(fs::exists(dir / "comparison.csv"));
  CHECK(fs::exists(dir / "comparison_summary.csv"));
}

TEST_CASE("image files round trip") {
  const fs::path dir = scratch("images");
  Rng rng(6);
  Matrix px = random_uniform(4, 6, rng, 0.0, 1.0);
  for (double& v : px.values()) v = std::round(v * 255.0) / 255.0;
  const GrayImage img = GrayImage::from_matrix(px);

  write_pgm(dir / "b.pgm", img);
  const GrayImage back = read_pgm(dir / "b.pgm");
  CHECK(max_abs(back.pixels() - px) < 1e-15);

  write_pgm(dir / "c16.pgm", img, 65535);
  CHECK(max_abs(read_pgm(dir / "c16.pgm").pixels() - px) < 1.0 / 65535);

  write_csv_image(dir / "a.csv", img);
  CHECK(read_csv_image(dir / "a.csv").pixels() == px);

  std::ofstream(dir / "d.pgm") << "P2\n# comment\n3 1\n4\n0 2 4\n";
  const GrayImage ascii = read_pgm(dir / "d.pgm");
  CHECK(ascii.pixels() == Matrix::from_rows({{0, 0.5, 1}}));

  std::ofstream(dir / "notes.txt") << "ignored";
  CHECK(load_image_directory(dir).size() == 4);
}

TEST_CASE("image loading errors") {
  CHECK_THROWS_AS(load_image_directory(fs::temp_directory_path() / "macgan_unit" / "nope"),
                  InputError);
  const fs::path empty = scratch("empty");
  CHECK_THROWS_AS(load_image_directory(empty), InputError);

  const fs::path bad = scratch("bad");
  std::ofstream(bad / "broken.pgm") << "P7\n1 1\n255\n";
  try {
    load_image_directory(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("broken.pgm") != std::string::npos);
  }
  std::ofstream(bad / "broken.pgm") << "P2\n2 1\n255\n10\n";
  CHECK_THROWS_AS(read_pgm(bad / "broken.pgm"), InputError);
  std::ofstream(bad / "wide.csv") << "0.1,2.0\n";
  CHECK_THROWS_AS(read_csv_image(bad / "wide.csv"), InputError);
  std::ofstream(bad / "ragged.csv") << "0.1,0.2\n0.3\n";
  CHECK_THROWS_AS(read_csv_image(bad / "ragged.csv"), InputError);
}
