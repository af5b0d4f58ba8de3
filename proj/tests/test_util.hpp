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

// Random generators shared by the property-style tests.

#pragma once

#include <random>
#include <vector>

#include "uvcurate/frame_io.hpp"
#include "uvcurate/stat_filters.hpp"

namespace uvcurate::testing {

/// Frames mixing noise, flat gray regions, saturated pixels and dark bars so
/// every filter sees values on both sides of its threshold.
inline io::Frame RandomFrame(std::mt19937_64& rng, int width, int height) {
  io::Frame f;
  f.width = width;
  f.height = height;
  f.rgb.resize(f.pixel_count() * 3);
  std::uniform_int_distribution<int> byte(0, 255);
  const int mode = std::uniform_int_distribution<int>(0, 3)(rng);
  const int bar = std::uniform_int_distribution<int>(0, std::max(1, height / 8))(rng);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      uint8_t* p = &f.rgb[(static_cast<size_t>(y) * width + x) * 3];
      if (y < bar || y >= height - bar) {
        p[0] = p[1] = p[2] = static_cast<uint8_t>(byte(rng) % 4);
        continue;
      }
      switch (mode) {
        case 0:
          p[0] = byte(rng), p[1] = byte(rng), p[2] = byte(rng);
          break;
        case 1: {
          const uint8_t v = byte(rng);
          p[0] = p[1] = v;
          p[2] = static_cast<uint8_t>(std::min(255, v + byte(rng) % 3));
          break;
        }
        case 2:
          p[0] = p[1] = p[2] = byte(rng) < 40 ? 255 : 128;
          break;
        default:
          p[0] = static_cast<uint8_t>(byte(rng) % 8);
          p[1] = static_cast<uint8_t>(248 + byte(rng) % 8);
          p[2] = byte(rng);
      }
    }
  }
  return f;
}

inline filters::TextBox RandomBox(std::mt19937_64& rng, int width, int height) {
  std::uniform_int_distribution<int> xd(0, width - 1), yd(0, height - 1);
  int a = xd(rng), b = xd(rng), c = yd(rng), d = yd(rng);
  if (a > b) std::swap(a, b);
  if (c > d) std::swap(c, d);
  return {a, c, b + 1, d + 1};
}

inline std::vector<filters::TextBox> RandomBoxes(std::mt19937_64& rng, int width,
                                                int height) {
  std::vector<filters::TextBox> boxes(
      std::uniform_int_distribution<int>(0, 12)(rng));
  for (auto& b : boxes) b = RandomBox(rng, width, height);
  return boxes;
}

/// Deterministic white-noise texture sampled at (x + ox, y + oy); unique at
/// block scale, so block matching has exactly one zero-SAD candidate.
inline uint8_t NoiseAt(int64_t x, int64_t y, uint64_t seed) {
  uint64_t h = seed ^ (static_cast<uint64_t>(x) * 0x9E3779B97F4A7C15ull) ^
               (static_cast<uint64_t>(y) * 0xC2B2AE3D27D4EB4Full);
  h ^= h >> 31;
  h *= 0xBF58476D1CE4E5B9ull;
  h ^= h >> 29;
  return static_cast<uint8_t>(h >> 56);
}

inline io::Frame NoiseFrame(int width, int height, int64_t ox, int64_t oy,
                            uint64_t seed = 1, int64_t index = 0) {
  io::Frame f;
  f.index = index;
  f.width = width;
  f.height = height;
  f.rgb.resize(f.pixel_count() * 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const uint8_t v = NoiseAt(x + ox, y + oy, seed);
      uint8_t* p = &f.rgb[(static_cast<size_t>(y) * width + x) * 3];
      p[0] = p[1] = p[2] = v;
    }
  }
  return f;
}

}  // namespace uvcurate::testing
