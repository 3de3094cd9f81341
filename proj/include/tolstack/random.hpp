// SPDX-License-Identifier: Apache-2.0
//
// Counter-based SplitMix64 streams. The k-th output of a stream is a pure
// function of (key, k), so any chunk of any stream can be generated
// independently and parallel sampling reproduces serial sampling bit for bit.

#pragma once

#include <cstdint>

namespace tolstack {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Key of the substream `index` under a parent key; deterministic and
/// well separated for consecutive indices.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) noexcept {
  return splitmix64_mix(parent ^ splitmix64_mix(index + kSplitMixGamma));
}

class CounterStream {
public:
  constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return splitmix64_mix(key_ + (counter + 1) * kSplitMixGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

private:
  std::uint64_t key_;
};

}  // namespace tolstack
