#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "macgan/matrix.hpp"

namespace macgan {

/// Shortest decimal form of `v` that parses back to the same double.
std::string format_double(double v);

/// One matrix row per line, comma separated, round-trip precision.
void write_matrix_csv(std::ostream& out, const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Parses the format written by write_matrix_csv. Blank lines are skipped.
/// Throws InputError on ragged rows or unparsable fields.
Matrix read_matrix_csv(std::istream& in, const std::string& source_name = "<stream>");
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Small row-oriented CSV writer for logs and reports.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(std::size_t v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(const std::string& v);
  CsvWriter& empty_field();
  void end_row();
  void flush();

 private:
  void separator();

  std::filesystem::path path_;
  std::size_t columns_;
  std::size_t pending_ = 0;
  std::string row_;
  struct Stream;
  std::unique_ptr<Stream> stream_;
};

}  // namespace macgan
