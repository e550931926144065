#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace evobandit {

// SplitMix64 finalizer. Bijective 64-bit mixer used for seeding and for
// deriving child stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Key-derived random stream: xoshiro256++ seeded through SplitMix64.
//
// Streams form a tree. child(k...) derives a new stream from the parent's
// immutable key and the given path keys only; it never consumes draws from
// the parent, so derivation is independent of how much the parent has been
// used and of any thread scheduling. Every simulation draw flows through an
// explicit Rng value, which is what makes runs bit-reproducible for a given
// master seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : key_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9E3779B97F4A7C15ull;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
      word = z ^ (z >> 31);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
      state_[0] = 0x9E3779B97F4A7C15ull;
    }
  }

  std::uint64_t key() const noexcept { return key_; }

  Rng child(std::uint64_t k0) const noexcept { return Rng(absorb(key_, k0)); }
  Rng child(std::uint64_t k0, std::uint64_t k1) const noexcept {
    return Rng(absorb(absorb(key_, k0), k1));
  }
  Rng child(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2) const noexcept {
    return Rng(absorb(absorb(absorb(key_, k0), k1), k2));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1): top 53 bits of one 64-bit draw.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return next_double() < p; }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller (trigonometric form); two uniform draws
  // per call, no cached second variate.
  double normal() noexcept {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  // Unbiased integer in [0, n) (Lemire multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) noexcept {
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = below(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  static constexpr std::uint64_t absorb(std::uint64_t key,
                                        std::uint64_t v) noexcept {
    return mix64(key ^ (mix64(v) + 0x9E3779B97F4A7C15ull + (key << 6) +
                        (key >> 2)));
  }

  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_;
};

// Stream-tree tags used by the evolutionary loop; kept in one place so the
// derivation scheme is auditable.
namespace stream_tag {
inline constexpr std::uint64_t init = 0;
inline constexpr std::uint64_t fitness = 1;
inline constexpr std::uint64_t selection = 2;
inline constexpr std::uint64_t mutation = 3;
}  // namespace stream_tag

}  // namespace evobandit
