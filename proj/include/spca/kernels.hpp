#pragma once

// Data-parallel inner loops used by the estimators. Every kernel has a scalar
// reference implementation; vector variants (AVX2+FMA on x86-64, NEON on
// aarch64) are selected once at startup from the CPU feature bits and can be
// overridden for equivalence testing. Kernels take raw contiguous ranges so the
// ISA-specific translation units stay free of Eigen.

#include <cstddef>
#include <span>
#include <string_view>

namespace spca::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]^2
  double (*sum_squares)(const double* a, std::size_t n);
  // acc[i] += x[i]^2
  void (*accumulate_squares)(double* acc, const double* x, std::size_t n);
  // minus[i] = x[i] - z[i]; plus[i] = x[i] + z[i]
  void (*split)(const double* x, const double* z, double* minus, double* plus, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(SPCA_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(SPCA_HAVE_NEON)
const KernelTable& neon_table();
#endif

// True when the running CPU can execute the given ISA's kernels and the
// binary was built with them.
bool isa_available(Isa isa);

// Best ISA detected at startup, unless SPCA_FORCE_SCALAR is set in the
// environment.
Isa detected_isa();

Isa active_isa();
const KernelTable& table(Isa isa);
const KernelTable& active();

// Overrides dispatch process-wide. Throws spca::Error if the ISA is not
// available. Not meant to be flipped while other threads run kernels.
void force_isa(Isa isa);
void reset_isa();

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double sum_squares(std::span<const double> a) {
  return active().sum_squares(a.data(), a.size());
}

inline void accumulate_squares(std::span<double> acc, std::span<const double> x) {
  active().accumulate_squares(acc.data(), x.data(), acc.size());
}

inline void split(std::span<const double> x, std::span<const double> z, std::span<double> minus,
                  std::span<double> plus) {
  active().split(x.data(), z.data(), minus.data(), plus.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}

}  // namespace spca::kernels
