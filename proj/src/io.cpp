#include "zap/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "zap/errors.hpp"

namespace zap::io {

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  return in;
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  auto out = open_out(path);
  out << "# rows=" << m.rows() << " cols=" << m.cols() << "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ",";
      out << format_float(m(i, j));
    }
    out << "\n";
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty file: " + path.string());
  Index rows = 0;
  Index cols = 0;
  if (std::sscanf(line.c_str(), "# rows=%td cols=%td", &rows, &cols) != 2) {
    throw Error("missing '# rows=M cols=N' header in " + path.string());
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw Error("truncated matrix in " + path.string());
    }
    std::stringstream ss(line);
    std::string cell;
    for (Index j = 0; j < cols; ++j) {
      if (!std::getline(ss, cell, ',')) {
        throw Error("short row " + std::to_string(i) + " in " + path.string());
      }
      m(i, j) = std::stod(cell);
    }
  }
  return m;
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
  write_matrix_csv(path, v);
}

Vector read_vector_csv(const std::filesystem::path& path) {
  Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) {
    throw Error("expected a single-column vector in " + path.string());
  }
  return m.col(0);
}

void write_kv(const std::filesystem::path& path, const KvPairs& pairs) {
  auto out = open_out(path);
  for (const auto& [key, value] : pairs) out << key << "=" << value << "\n";
}

std::map<std::string, std::string> read_kv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::map<std::string, std::string> result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("malformed key=value line in " + path.string() + ": " + line);
    }
    result[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return result;
}

}  // namespace zap::io
