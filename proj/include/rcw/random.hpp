#pragma once

#include <cstdint>
#include <limits>

namespace rcw {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// SplitMix64. Small state, so one generator per walk is cheap; streams for
/// different walk indices are derived by hashing (seed, index).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

inline SplitMix64 stream(std::uint64_t seed, std::uint64_t index) noexcept {
  return SplitMix64(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

inline SplitMix64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return stream(mix64(seed ^ mix64(a + 0x2545f4914f6cdd1dULL)), b);
}

}  // namespace rcw
