#include "spca/kernels.hpp"

namespace spca::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double sum_squares_scalar(const double* a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * a[i];
  return sum;
}

void accumulate_squares_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * x[i];
}

void split_scalar(const double* x, const double* z, double* minus, double* plus, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    minus[i] = x[i] - z[i];
    plus[i] = x[i] + z[i];
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{dot_scalar, sum_squares_scalar, accumulate_squares_scalar,
                             split_scalar, axpy_scalar};
  return t;
}

}  // namespace spca::kernels
