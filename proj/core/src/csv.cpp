#include "macgan/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace macgan {

std::string format_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  write_matrix_csv(out, m);
  if (!out) throw InputError("failed writing " + path.string());
}

Matrix read_matrix_csv(std::istream& in, const std::string& source_name) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      std::size_t b = pos;
      std::size_t e = end;
      while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
      while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
      double v = 0.0;
      const auto res = std::from_chars(line.data() + b, line.data() + e, v);
      if (res.ec != std::errc() || res.ptr != line.data() + e || b == e) {
        throw InputError(source_name + ":" + std::to_string(line_no) + ": bad number '" +
                         line.substr(b, e - b) + "'");
      }
      values.push_back(v);
      ++count;
      pos = end + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw InputError(source_name + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " fields, got " + std::to_string(count));
    }
    ++rows;
  }
  return Matrix(rows, cols, std::move(values));
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_matrix_csv(in, path.string());
}

struct CsvWriter::Stream {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), columns_(header.size()), stream_(std::make_unique<Stream>()) {
  stream_->out.open(path);
  if (!stream_->out) {
    throw InputError("cannot open " + path.string() + " for writing");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) stream_->out << ',';
    stream_->out << header[i];
  }
  stream_->out << '\n';
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::separator() {
  if (pending_ > 0) row_ += ',';
  ++pending_;
}

CsvWriter& CsvWriter::field(double v) {
  separator();
  row_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::field(long long v) {
  separator();
  row_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::field(const std::string& v) {
  separator();
  row_ += v;
  return *this;
}

CsvWriter& CsvWriter::empty_field() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != columns_) {
    throw DimensionError("CsvWriter(" + path_.string() + "): row has " +
                         std::to_string(pending_) + " fields, header has " +
                         std::to_string(columns_));
  }
  stream_->out << row_ << '\n';
  row_.clear();
  pending_ = 0;
}

void CsvWriter::flush() { stream_->out.flush(); }

}  // namespace macgan
