#include <atomic>
#include <cstdlib>

#include "spca/error.hpp"
#include "spca/kernels.hpp"

namespace spca::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(SPCA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("SPCA_FORCE_SCALAR"); env != nullptr && env[0] != '\0' &&
                                                          env[0] != '0') {
    return Isa::scalar;
  }
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2_fma();
    case Isa::neon:
#if defined(SPCA_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  static const Isa isa = detect();
  return isa;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(SPCA_HAVE_AVX2)
    case Isa::avx2:
      return avx2_table();
#endif
#if defined(SPCA_HAVE_NEON)
    case Isa::neon:
      return neon_table();
#endif
    default:
      return scalar_table();
  }
}

const KernelTable& active() { return table(active_isa()); }

void force_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::invalid_argument,
                "kernel ISA '" + std::string(isa_name(isa)) + "' is not available on this machine");
  }
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() { current().store(detected_isa(), std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace spca::kernels
