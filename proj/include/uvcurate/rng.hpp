// Copyright 2026 The uvcurate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable, seedable random streams. The generator is xoshiro256** seeded
// through splitmix64; a stream is keyed by (seed, string key) so each clip
// gets an independent sequence regardless of processing order.

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace uvcurate {

inline uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline uint64_t Fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Source of uniform integers; lets tests script exact draws.
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  /// Uniform integer in [0, n), n > 0.
  virtual uint64_t Below(uint64_t n) = 0;
};

class Xoshiro256 final : public UniformSource {
 public:
  explicit Xoshiro256(uint64_t seed) {
    for (auto& word : s_) word = SplitMix64(seed);
  }
  Xoshiro256(uint64_t seed, std::string_view key)
      : Xoshiro256(seed ^ Fnv1a64(key)) {}

  uint64_t Next() {
    const uint64_t result = Rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = Rotl(s_[3], 45);
    return result;
  }

  uint64_t Below(uint64_t n) override {
    // Reject the short leading range so every residue is equally likely.
    const uint64_t threshold = (0 - n) % n;
    uint64_t x;
    do {
      x = Next();
    } while (x < threshold);
    return x % n;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double Unit() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

 private:
  static uint64_t Rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<uint64_t, 4> s_{};
};

}  // namespace uvcurate
