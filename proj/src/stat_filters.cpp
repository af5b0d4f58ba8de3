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

#include "uvcurate/stat_filters.hpp"

#include <algorithm>
#include <cmath>

#include "uvcurate/error.hpp"

namespace uvcurate::filters {

void StatThresholds::Validate() const {
  auto ratio = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorCode::kConfigError,
                  std::string(name) + " must lie in (0, 1)");
    }
  };
  ratio(text_area_ratio, "text_area_ratio");
  ratio(bad_frame_ratio, "bad_frame_ratio");
  ratio(border_depth_ratio, "border_depth_ratio");
  ratio(exposure_pixel_ratio, "exposure_pixel_ratio");
  if (exposure_low >= exposure_high) {
    throw Error(ErrorCode::kConfigError, "exposure_low must be < exposure_high");
  }
  if (border_mean_max <= 0 || gray_variance_min <= 0) {
    throw Error(ErrorCode::kConfigError, "thresholds must be positive");
  }
  if (text_sample_interval < 1) {
    throw Error(ErrorCode::kConfigError, "text_sample_interval must be >= 1");
  }
}

int64_t RectUnionArea(std::span<const TextBox> boxes) {
  if (boxes.empty()) return 0;
  std::vector<int> xs;
  xs.reserve(boxes.size() * 2);
  for (const auto& b : boxes) {
    xs.push_back(b.x0);
    xs.push_back(b.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  int64_t area = 0;
  std::vector<std::pair<int, int>> spans;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    const int left = xs[i];
    const int right = xs[i + 1];
    spans.clear();
    for (const auto& b : boxes) {
      if (b.x0 <= left && b.x1 >= right) spans.emplace_back(b.y0, b.y1);
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    int64_t covered = 0;
    int cur_lo = spans[0].first;
    int cur_hi = spans[0].second;
    for (size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].first > cur_hi) {
        covered += cur_hi - cur_lo;
        cur_lo = spans[k].first;
        cur_hi = spans[k].second;
      } else {
        cur_hi = std::max(cur_hi, spans[k].second);
      }
    }
    covered += cur_hi - cur_lo;
    area += covered * (right - left);
  }
  return area;
}

double TextUnionRatio(int width, int height, std::span<const TextBox> boxes) {
  for (const auto& b : boxes) {
    if (b.x0 < 0 || b.y0 < 0 || b.x0 >= b.x1 || b.y0 >= b.y1 ||
        b.x1 > width || b.y1 > height) {
      throw Error(ErrorCode::kInvalidBox,
                  "[" + std::to_string(b.x0) + "," + std::to_string(b.y0) +
                      "," + std::to_string(b.x1) + "," + std::to_string(b.y1) +
                      ") outside " + std::to_string(width) + "x" +
                      std::to_string(height));
    }
  }
  return static_cast<double>(RectUnionArea(boxes)) /
         (static_cast<double>(width) * height);
}

BorderDepth BorderDepthFor(int width, int height, double depth_ratio) {
  BorderDepth d;
  d.dx = std::max(1, static_cast<int>(std::lround(depth_ratio * width)));
  d.dy = std::max(1, static_cast<int>(std::lround(depth_ratio * height)));
  if (2 * d.dx >= width || 2 * d.dy >= height) {
    throw Error(ErrorCode::kFrameTooSmall,
                std::to_string(width) + "x" + std::to_string(height) +
                    " cannot hold border strips");
  }
  return d;
}

namespace {

inline uint8_t GrayAt(const uint8_t* rgb, size_t pixel) {
  const uint8_t* p = rgb + 3 * pixel;
  return io::GrayOf(p[0], p[1], p[2]);
}

int64_t SumGray(const io::Frame& f, int x0, int y0, int x1, int y1) {
  int64_t sum = 0;
  for (int y = y0; y < y1; ++y) {
    const size_t row = static_cast<size_t>(y) * f.width;
    for (int x = x0; x < x1; ++x) sum += GrayAt(f.rgb.data(), row + x);
  }
  return sum;
}

}  // namespace

double BorderMean(const io::Frame& f, double depth_ratio) {
  const BorderDepth d = BorderDepthFor(f.width, f.height, depth_ratio);
  const int w = f.width, h = f.height;
  int64_t sum = SumGray(f, 0, 0, w, d.dy) + SumGray(f, 0, h - d.dy, w, h) +
                SumGray(f, 0, d.dy, d.dx, h - d.dy) +
                SumGray(f, w - d.dx, d.dy, w, h - d.dy);
  const int64_t count = int64_t{2} * d.dy * w + int64_t{2} * d.dx * (h - 2 * d.dy);
  return static_cast<double>(sum) / static_cast<double>(count);
}

double BorderSides::min() const {
  return std::min(std::min(top, bottom), std::min(left, right));
}

BorderSides BorderSideMeans(const io::Frame& f, double depth_ratio) {
  const BorderDepth d = BorderDepthFor(f.width, f.height, depth_ratio);
  const int w = f.width, h = f.height;
  const double horiz = static_cast<double>(d.dy) * w;
  const double vert = static_cast<double>(d.dx) * h;
  return {SumGray(f, 0, 0, w, d.dy) / horiz,
          SumGray(f, 0, h - d.dy, w, h) / horiz,
          SumGray(f, 0, 0, d.dx, h) / vert,
          SumGray(f, w - d.dx, 0, w, h) / vert};
}

double ExposureBadRatio(const io::Frame& f, int low, int high) {
  const size_t n = f.pixel_count();
  int64_t bad = 0;
  for (size_t i = 0; i < n; ++i) {
    const int g = GrayAt(f.rgb.data(), i);
    bad += (g > high || g < low);
  }
  return static_cast<double>(bad) / static_cast<double>(n);
}

double GrayingScore(const io::Frame& f, bool bessel) {
  // 9 * var = 3 * (r^2 + g^2 + b^2) - (r + g + b)^2 per pixel, exact in
  // integers; the division happens once at the end.
  const size_t n = f.pixel_count();
  const uint8_t* p = f.rgb.data();
  int64_t total = 0;
  for (size_t i = 0; i < n; ++i, p += 3) {
    const int r = p[0], g = p[1], b = p[2];
    const int s1 = r + g + b;
    total += 3 * (r * r + g * g + b * b) - s1 * s1;
  }
  const double divisor = bessel ? 6.0 : 9.0;
  return static_cast<double>(total) / (divisor * static_cast<double>(n));
}

std::string_view FilterName(Filter f) {
  switch (f) {
    case Filter::kText: return "text";
    case Filter::kBorder: return "border";
    case Filter::kExposure: return "exposure";
    case Filter::kGraying: return "graying";
  }
  return "unknown";
}

FrameMeasures MeasureFrame(const io::Frame& f, const StatThresholds& t) {
  const BorderDepth d = BorderDepthFor(f.width, f.height, t.border_depth_ratio);
  const int w = f.width, h = f.height;
  const uint8_t* p = f.rgb.data();

  // Exposure compares the weighted sum directly: gray > high iff
  // sum + 500 >= 1000 * (high + 1), gray < low iff sum + 500 < 1000 * low.
  const int64_t over = int64_t{1000} * (t.exposure_high + 1) - 500;
  const int64_t under = int64_t{1000} * t.exposure_low - 500;
  int64_t bad = 0;
  int64_t var9 = 0;
  // Per-pixel variance terms stay below 2^20, so 32-bit sums over 2048
  // pixels cannot overflow.
  constexpr size_t kChunk = 2048;
  const size_t total = f.pixel_count();
  for (size_t begin = 0; begin < total; begin += kChunk) {
    const size_t n = std::min(kChunk, total - begin);
    int32_t chunk_bad = 0;
    int32_t chunk_var = 0;
    for (size_t i = 0; i < n; ++i, p += 3) {
      const int32_t r = p[0], g = p[1], b = p[2];
      const int32_t lum = 299 * r + 587 * g + 114 * b;
      chunk_bad += (lum >= over) | (lum < under);
      const int32_t s1 = r + g + b;
      chunk_var += 3 * (r * r + g * g + b * b) - s1 * s1;
    }
    bad += chunk_bad;
    var9 += chunk_var;
  }
  const int64_t top = SumGray(f, 0, 0, w, d.dy);
  const int64_t bottom = SumGray(f, 0, h - d.dy, w, h);
  const int64_t left = SumGray(f, 0, 0, d.dx, h);
  const int64_t right = SumGray(f, w - d.dx, 0, w, h);
  // Corner blocks are counted in two strips; remove one copy for the union.
  const int64_t corners = SumGray(f, 0, 0, d.dx, d.dy) +
                          SumGray(f, w - d.dx, 0, w, d.dy) +
                          SumGray(f, 0, h - d.dy, d.dx, h) +
                          SumGray(f, w - d.dx, h - d.dy, w, h);
  const int64_t union_count =
      int64_t{2} * d.dy * w + int64_t{2} * d.dx * (h - 2 * d.dy);
  const double n = static_cast<double>(f.pixel_count());
  const double horiz = static_cast<double>(d.dy) * w;
  const double vert = static_cast<double>(d.dx) * h;

  FrameMeasures m;
  m.border_mean = static_cast<double>(top + bottom + left + right - corners) /
                  static_cast<double>(union_count);
  m.border_side_min = BorderSides{top / horiz, bottom / horiz, left / vert,
                                  right / vert}
                          .min();
  m.exposure_ratio = static_cast<double>(bad) / n;
  m.graying = static_cast<double>(var9) / ((t.variance_bessel ? 6.0 : 9.0) * n);
  return m;
}

FrameFlags FlagFrame(const FrameMeasures& m, const StatThresholds& t) {
  FrameFlags flags;
  flags.border = (t.border_per_side ? m.border_side_min : m.border_mean) <
                 t.border_mean_max;
  flags.exposure = m.exposure_ratio > t.exposure_pixel_ratio;
  flags.graying = m.graying < t.gray_variance_min;
  return flags;
}

ClipVerdict AggregateClip(const std::vector<bool>& flags,
                          const StatThresholds& t) {
  if (flags.empty()) throw Error(ErrorCode::kEmptyClip, "no frames");
  ClipVerdict v;
  v.total = static_cast<int64_t>(flags.size());
  v.flagged = std::count(flags.begin(), flags.end(), true);
  v.ratio = static_cast<double>(v.flagged) / static_cast<double>(v.total);
  v.pass = v.ratio <= t.bad_frame_ratio;
  return v;
}

bool FilterReport::pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const FilterResult& r) { return r.verdict.pass; });
}

std::vector<Filter> FilterReport::Failed() const {
  std::vector<Filter> out;
  for (Filter f : kAllFilters) {
    if (!(*this)[f].verdict.pass) out.push_back(f);
  }
  return out;
}

std::vector<int64_t> TextSampleIndices(int64_t frame_count, int interval) {
  std::vector<int64_t> out;
  for (int64_t i = 0; i < frame_count; i += std::max(1, interval)) {
    out.push_back(i);
  }
  return out;
}

FilterAccumulator::FilterAccumulator(const StatThresholds& t) : t_(t) {}

bool FilterAccumulator::NextIsTextSample() const {
  return count_ % std::max(1, t_.text_sample_interval) == 0;
}

void FilterAccumulator::Push(const io::Frame& frame) {
  if (NextIsTextSample()) sample_dims_.emplace_back(frame.width, frame.height);
  const FrameFlags flags = FlagFrame(MeasureFrame(frame, t_), t_);
  flags_[static_cast<size_t>(Filter::kBorder)].push_back(flags.border);
  flags_[static_cast<size_t>(Filter::kExposure)].push_back(flags.exposure);
  flags_[static_cast<size_t>(Filter::kGraying)].push_back(flags.graying);
  ++count_;
}

FilterReport FilterAccumulator::Finish(
    std::span<const std::vector<TextBox>> sampled_boxes) const {
  if (count_ == 0) throw Error(ErrorCode::kEmptyClip, "no frames");
  const auto samples = TextSampleIndices(count_, t_.text_sample_interval);
  if (sampled_boxes.size() != samples.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected text boxes for " + std::to_string(samples.size()) +
                    " sampled frames, got " +
                    std::to_string(sampled_boxes.size()));
  }

  FilterReport report;
  for (size_t f = 0; f < report.results.size(); ++f) report.results[f].flags = flags_[f];
  auto& text = report[Filter::kText].flags;
  text.assign(static_cast<size_t>(count_), false);
  const int64_t k = std::max(1, t_.text_sample_interval);
  for (size_t j = 0; j < samples.size(); ++j) {
    const auto [w, h] = sample_dims_[j];
    const bool flagged = TextUnionRatio(w, h, sampled_boxes[j]) > t_.text_area_ratio;
    const int64_t end = std::min(count_, samples[j] + k);
    for (int64_t i = samples[j]; i < end; ++i) text[static_cast<size_t>(i)] = flagged;
  }
  for (auto& r : report.results) r.verdict = AggregateClip(r.flags, t_);
  return report;
}

FilterReport RunFilters(std::span<const io::Frame> frames,
                        std::span<const std::vector<TextBox>> sampled_boxes,
                        const StatThresholds& t) {
  FilterAccumulator acc(t);
  for (const auto& f : frames) acc.Push(f);
  return acc.Finish(sampled_boxes);
}

std::vector<std::pair<int64_t, int64_t>> EncodeRuns(
    const std::vector<bool>& flags) {
  std::vector<std::pair<int64_t, int64_t>> runs;
  const int64_t n = static_cast<int64_t>(flags.size());
  for (int64_t i = 0; i < n;) {
    if (!flags[i]) {
      ++i;
      continue;
    }
    int64_t j = i;
    while (j < n && flags[j]) ++j;
    runs.emplace_back(i, j - i);
    i = j;
  }
  return runs;
}

std::vector<bool> DecodeRuns(const std::vector<std::pair<int64_t, int64_t>>& runs,
                             int64_t total) {
  std::vector<bool> flags(static_cast<size_t>(total), false);
  for (auto [start, len] : runs) {
    if (start < 0 || len < 0 || start + len > total) {
      throw Error(ErrorCode::kInvalidArgument, "run outside bitmap");
    }
    std::fill_n(flags.begin() + start, len, true);
  }
  return flags;
}

}  // namespace uvcurate::filters
