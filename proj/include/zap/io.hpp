#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zap/linalg.hpp"

namespace zap::io {

// All floats are serialized with 17 significant digits so that values
// round-trip exactly through text.
std::string format_float(double v);

// Plain-text CSV of decimal floats, one matrix row per line, preceded by a
// one-line header "# rows=M cols=N". Vectors are a single column.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_vector_csv(const std::filesystem::path& path, const Vector& v);
Vector read_vector_csv(const std::filesystem::path& path);

using KvPairs = std::vector<std::pair<std::string, std::string>>;

void write_kv(const std::filesystem::path& path, const KvPairs& pairs);
std::map<std::string, std::string> read_kv(const std::filesystem::path& path);

}  // namespace zap::io
