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

// Naive reference implementations used only by tests. They are written
// independently of the library code paths they check: per-pixel loops,
// rasterization and direct summation, all in double precision.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "uvcurate/frame_io.hpp"
#include "uvcurate/stat_filters.hpp"

namespace uvcurate::oracle {

inline int Gray(const io::Rgb& c) {
  return static_cast<int>(
      std::lround((299.0 * c.r + 587.0 * c.g + 114.0 * c.b) / 1000.0));
}

inline double RasterUnionRatio(int width, int height,
                               const std::vector<filters::TextBox>& boxes) {
  std::vector<uint8_t> covered(static_cast<size_t>(width) * height, 0);
  for (const auto& b : boxes) {
    for (int y = b.y0; y < b.y1; ++y) {
      for (int x = b.x0; x < b.x1; ++x) covered[static_cast<size_t>(y) * width + x] = 1;
    }
  }
  int64_t count = 0;
  for (uint8_t c : covered) count += c;
  return static_cast<double>(count) / (static_cast<double>(width) * height);
}

inline double BorderMean(const io::Frame& f, double depth_ratio) {
  const int dx = std::max(1, static_cast<int>(std::round(depth_ratio * f.width)));
  const int dy = std::max(1, static_cast<int>(std::round(depth_ratio * f.height)));
  double sum = 0;
  double count = 0;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const bool border = x < dx || x >= f.width - dx || y < dy ||
                          y >= f.height - dy;
      if (!border) continue;
      sum += Gray(f.at(x, y));
      count += 1;
    }
  }
  return sum / count;
}

inline double ExposureBadRatio(const io::Frame& f, int low, int high) {
  double bad = 0;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const int g = Gray(f.at(x, y));
      if (g > high || g < low) bad += 1;
    }
  }
  return bad / (static_cast<double>(f.width) * f.height);
}

inline double GrayingScore(const io::Frame& f, bool bessel) {
  double total = 0;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const io::Rgb c = f.at(x, y);
      const double m = (c.r + c.g + c.b) / 3.0;
      const double ss = (c.r - m) * (c.r - m) + (c.g - m) * (c.g - m) +
                        (c.b - m) * (c.b - m);
      total += ss / (bessel ? 2.0 : 3.0);
    }
  }
  return total / (static_cast<double>(f.width) * f.height);
}

inline double RelativeError(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace uvcurate::oracle
