#pragma once

// Matrix files: CSV (real only, one row per line) and JSON
// {"rows": r, "cols": c, "data": [...]} with row-major entries that are
// numbers or [re, im] pairs.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "framec/linalg.hpp"

namespace framec {

enum class MatrixFormat { Csv, Json };

using AnyMat = std::variant<Mat<double>, Mat<Complex>>;

/// .json selects JSON, anything else CSV.
MatrixFormat format_for_path(const std::filesystem::path& path);

AnyMat parse_csv(std::string_view text);
AnyMat parse_matrix_json(const nlohmann::json& j);
AnyMat read_matrix(const std::filesystem::path& path, MatrixFormat format);
AnyMat read_matrix(const std::filesystem::path& path);

inline bool is_complex(const AnyMat& m) noexcept { return std::holds_alternative<Mat<Complex>>(m); }
Mat<Complex> to_complex(const AnyMat& m);

template <Field T>
nlohmann::json matrix_to_json(const Mat<T>& m);
nlohmann::json matrix_to_json(const AnyMat& m);

/// Shortest representation that reads back to the same double.
std::string format_double(double v);

/// Throws MixedField for complex input.
std::string to_csv(const AnyMat& m);

std::string serialize_matrix(const AnyMat& m, MatrixFormat format);
void write_matrix(const std::filesystem::path& path, const AnyMat& m, MatrixFormat format);
void write_matrix(const std::filesystem::path& path, const AnyMat& m);

} // namespace framec
