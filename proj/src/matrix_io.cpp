#include "spca/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spca/error.hpp"

namespace spca {
namespace {

Error parse_error(const std::string& msg) { return Error(ErrorKind::io, "matrix text: " + msg); }

}  // namespace

void write_matrix(std::ostream& out, const Matrix& m) {
  out << "# rows=" << m.rows() << " cols=" << m.cols() << '\n';
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), m(i, j), std::chars_format::general, 17);
      if (j > 0) out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw parse_error("missing header line");
  long long rows = -1;
  long long cols = -1;
  {
    std::istringstream hs(header);
    std::string hash, rtok, ctok;
    hs >> hash >> rtok >> ctok;
    if (hash != "#" || rtok.rfind("rows=", 0) != 0 || ctok.rfind("cols=", 0) != 0) {
      throw parse_error("header must read '# rows=<n> cols=<p>'");
    }
    try {
      rows = std::stoll(rtok.substr(5));
      cols = std::stoll(ctok.substr(5));
    } catch (const std::exception&) {
      throw parse_error("unreadable dimensions in header");
    }
  }
  if (rows < 1 || cols < 1) throw parse_error("dimensions must be positive");

  Matrix m(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw parse_error("expected " + std::to_string(rows) + " data rows");
    const char* p = line.data();
    const char* end = p + line.size();
    for (Index j = 0; j < cols; ++j) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) {
        throw parse_error("row " + std::to_string(i + 1) + " has fewer than " +
                          std::to_string(cols) + " numbers");
      }
      if (!std::isfinite(v)) throw parse_error("non-finite entry in row " + std::to_string(i + 1));
      m(i, j) = v;
      p = res.ptr;
    }
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p != end) throw parse_error("row " + std::to_string(i + 1) + " has extra tokens");
  }
  return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot open for writing: " + path.string());
  write_matrix(out, m);
  if (!out) throw Error(ErrorKind::io, "write failed: " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open for reading: " + path.string());
  return read_matrix(in);
}

}  // namespace spca
