#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fnav {

// splitmix64 finalizer; used to derive independent stream seeds so that
// skipping a frame or reordering flights never shifts another stream.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0) {
  return mix_seed(base ^ mix_seed(stream ^ mix_seed(index)));
}

// Thin wrapper around mt19937_64 with hand-rolled variate transforms.
// std::uniform_real_distribution and friends are implementation-defined,
// which would break the bit-exact reproducibility contract; these
// transforms are fixed arithmetic on the raw 64-bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * static_cast<double>(hi - lo + 1));
  }

  // Standard normal via Box-Muller (single branch, no cached spare).
  double normal() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Exact Poisson sample. Knuth's product method underflows for large means,
  // so the mean is split into chunks; a sum of independent Poissons is
  // Poisson in the total.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    int count = 0;
    double remaining = mean;
    while (remaining > 0.0) {
      const double chunk = remaining > 16.0 ? 16.0 : remaining;
      remaining -= chunk;
      const double limit = std::exp(-chunk);
      double product = uniform();
      while (product > limit) {
        ++count;
        product *= uniform();
      }
    }
    return count;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fnav
