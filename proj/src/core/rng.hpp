/*
 * (C) Copyright 2026 dtexnet authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>

namespace dtexnet {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Counter-style key derivation: sub-streams for (network, vertex, walk)
// tuples are keyed independently, so results do not depend on the order in
// which workers consume the work items.
constexpr uint64_t derive_seed(uint64_t base, uint64_t salt) {
  return mix64(base + kGolden * mix64(salt + kGolden));
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(uint64_t seed) : state_(seed) {}

  constexpr uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform draw in [0, bound), bound > 0. Multiply-shift reduction keeps the
  // draw integer-only and identical on every conforming platform.
  uint32_t next_below(uint32_t bound) {
    return static_cast<uint32_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  uint64_t state_;
};

}  // namespace dtexnet
