// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace rissat {

/// SplitMix64 as a UniformRandomBitGenerator. Used for short counter-derived
/// sub-streams, so any draw can be reproduced from (seed, stream, counter)
/// without sharing generator state between threads.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// A named random stream: a master seed plus a stream id. Sub-generators are
/// derived by counter and never shared.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  SplitMix64 at(std::uint64_t counter) const noexcept {
    return SplitMix64(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL) ^
                            mix64(counter * 0x9e3779b97f4a7c15ULL + 1)));
  }

  RngStream child(std::uint64_t id) const noexcept {
    return RngStream{seed, mix64(stream ^ (id + 0x5851f42d4c957f2dULL))};
  }

  RngStream child(std::string_view name) const noexcept { return child(fnv1a64(name)); }
};

} // namespace rissat
