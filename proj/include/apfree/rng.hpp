// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>

namespace apfree {

// Counter-based generator: output i of stream s under seed k is
//   mix64(mix64(k ^ (s * kStreamSalt)) + (i + 1) * kGolden)
// where mix64 is the SplitMix64 finalizer. Any draw can be recomputed
// from (seed, stream, counter) alone, so index-keyed sampling is the same
// for every partition of the work.
inline constexpr std::string_view kGeneratorId = "splitmix64-counter/v1";

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix64(seed ^ (stream * kStreamSalt))) {}

  [[nodiscard]] constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  [[nodiscard]] constexpr double uniform_at(std::uint64_t counter) const noexcept {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  /// Bernoulli(p) keyed by counter; p >= 1 always succeeds.
  [[nodiscard]] constexpr bool bernoulli_at(std::uint64_t counter, double p) const noexcept {
    return uniform_at(counter) < p;
  }

 private:
  std::uint64_t key_;
};

/// Sequential view over a CounterRng stream.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : rng_(seed, stream) {}

  constexpr std::uint64_t next_u64() noexcept { return rng_.at(counter_++); }
  constexpr double next_double() noexcept { return rng_.uniform_at(counter_++); }

  /// Uniform integer in [0, bound), bound > 0. Lemire's method with rejection.
  std::uint64_t bounded(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  [[nodiscard]] constexpr std::uint64_t consumed() const noexcept { return counter_; }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace apfree
