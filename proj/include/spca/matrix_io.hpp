#pragma once

#include <filesystem>
#include <iosfwd>

#include "spca/matrix.hpp"

namespace spca {

// Text format:
//   # rows=<n> cols=<p>
//   n lines of p space-separated decimals, 17 significant digits.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

// File variants throw ErrorKind::io on open/parse failures.
void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace spca
