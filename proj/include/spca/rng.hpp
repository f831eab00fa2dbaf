#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "spca/matrix.hpp"

namespace spca {

using Seed = std::uint64_t;

// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// h0 = mix64(base); h_{k+1} = mix64(h_k ^ field_k).
inline Seed derive_seed(Seed base, std::initializer_list<std::uint64_t> fields) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t f : fields) h = mix64(h ^ f);
  return h;
}

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  // Filled in storage (column-major) order.
  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    double* data = m.data();
    for (Index i = 0; i < m.size(); ++i) data[i] = normal_(engine_);
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spca
