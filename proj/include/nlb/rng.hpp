#pragma once

#include <cstdint>
#include <random>

namespace nlb {

/// Seeded random source with portable output.
///
/// std::mt19937_64 produces an implementation-independent bit stream, but the
/// standard distributions do not, so the floating-point draws are derived here
/// directly from the raw 64-bit words. Same seed, same sequence, everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Rejection-free modulo is fine here: n is
  /// always tiny compared to 2^64, so the bias is far below any tolerance
  /// in play, and the result stays portable.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nlb
