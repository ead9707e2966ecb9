#pragma once

#include <cstdint>
#include <random>

#include "omt/core.hpp"

namespace omt {

// Deterministic random source used by stream synthesis. mt19937_64 output is
// pinned by the standard, and every derived draw below uses only IEEE
// arithmetic (+, -, *, /, sqrt), so traces are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Approximate standard normal: sum of 12 uniforms minus 6 (Irwin-Hall).
  double gaussian() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += unit();
    return s - 6.0;
  }

  /// Vector of independent gaussians.
  FeatureVector gaussian_vector(int dim) {
    FeatureVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gaussian();
    return v;
  }

  /// Uniform index in [0, bound).
  std::uint64_t index(std::uint64_t bound) {
    auto i = static_cast<std::uint64_t>(unit() * static_cast<double>(bound));
    return i < bound ? i : bound - 1;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace omt
