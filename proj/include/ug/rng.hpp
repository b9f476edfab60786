#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace ug {

// Deterministic splitmix64 stream. Used everywhere randomness is needed so
// that runs are reproducible bit-for-bit regardless of platform or standard
// library version (std::uniform_*_distribution output is not pinned by the
// standard, so we roll our own draws on top of the raw stream).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Modulo bias is negligible for the small n used here.
  std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  int next_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_range(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box-Muller; one draw per call, the paired value is discarded.
  double next_normal(double mean, double sigma) {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::uint64_t state_;
};

// Stable seed combinator for (stream, index) style derivations.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ug
