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

// Statistical frame filters: text area, black border, exposure and graying.
// Each filter is a pure per-frame test; a clip fails a filter when the share
// of flagged frames is strictly greater than bad_frame_ratio.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uvcurate/frame_io.hpp"

namespace uvcurate::filters {

struct StatThresholds {
  double text_area_ratio = 0.02;
  double bad_frame_ratio = 0.05;
  double border_depth_ratio = 0.03;
  double border_mean_max = 3.0;
  int exposure_low = 5;
  int exposure_high = 250;
  double exposure_pixel_ratio = 0.12;
  double gray_variance_min = 1.2;
  // Divide the per-pixel channel variance by 2 instead of 3.
  bool variance_bessel = false;
  // Flag a frame when any single border strip is dark, instead of the union.
  bool border_per_side = false;
  // OCR runs on every k-th frame; its verdict covers the following k frames.
  int text_sample_interval = 5;

  void Validate() const;
  bool operator==(const StatThresholds&) const = default;
};

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct TextBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  bool operator==(const TextBox&) const = default;
};

/// Exact area covered by the union of the boxes.
int64_t RectUnionArea(std::span<const TextBox> boxes);

/// Union area over frame area. Throws InvalidBox if any box leaves the frame
/// or is empty.
double TextUnionRatio(int width, int height, std::span<const TextBox> boxes);

struct BorderDepth {
  int dx = 0;
  int dy = 0;
};

/// Strip thickness for a frame; throws FrameTooSmall when the strips from
/// opposite sides would meet.
BorderDepth BorderDepthFor(int width, int height, double depth_ratio);

/// Mean BT.601 gray level over the union of the four border strips.
double BorderMean(const io::Frame& frame, double depth_ratio);

/// Means of the four full strips (corners belong to two strips each).
struct BorderSides {
  double top = 0, bottom = 0, left = 0, right = 0;
  double min() const;
};
BorderSides BorderSideMeans(const io::Frame& frame, double depth_ratio);

/// Share of pixels whose gray level is above `high` or below `low`.
double ExposureBadRatio(const io::Frame& frame, int low = 5, int high = 250);

/// Mean over pixels of the variance of the (R, G, B) triple.
double GrayingScore(const io::Frame& frame, bool bessel = false);

enum class Filter { kText = 0, kBorder, kExposure, kGraying };
inline constexpr std::array<Filter, 4> kAllFilters = {
    Filter::kText, Filter::kBorder, Filter::kExposure, Filter::kGraying};
std::string_view FilterName(Filter f);

/// All pixel-based measurements of one frame from a single pass.
struct FrameMeasures {
  double border_mean = 0;
  double border_side_min = 0;
  double exposure_ratio = 0;
  double graying = 0;
};
FrameMeasures MeasureFrame(const io::Frame& frame, const StatThresholds& t);

struct FrameFlags {
  bool border = false;
  bool exposure = false;
  bool graying = false;
};
FrameFlags FlagFrame(const FrameMeasures& m, const StatThresholds& t);

struct ClipVerdict {
  int64_t flagged = 0;
  int64_t total = 0;
  double ratio = 0;
  bool pass = true;
  bool operator==(const ClipVerdict&) const = default;
};

/// Throws EmptyClip on an empty bitmap.
ClipVerdict AggregateClip(const std::vector<bool>& flags,
                          const StatThresholds& t);

struct FilterResult {
  std::vector<bool> flags;
  ClipVerdict verdict;
  bool operator==(const FilterResult&) const = default;
};

struct FilterReport {
  std::array<FilterResult, 4> results;

  const FilterResult& operator[](Filter f) const {
    return results[static_cast<size_t>(f)];
  }
  FilterResult& operator[](Filter f) { return results[static_cast<size_t>(f)]; }

  bool pass() const;
  std::vector<Filter> Failed() const;
  bool operator==(const FilterReport&) const = default;
};

/// Frame indices (clip-relative) handed to the text detector.
std::vector<int64_t> TextSampleIndices(int64_t frame_count, int interval);

/// Runs the four filters over a clip. `sampled_boxes[j]` holds the text boxes
/// detected on frame TextSampleIndices(...)[j].
FilterReport RunFilters(std::span<const io::Frame> frames,
                        std::span<const std::vector<TextBox>> sampled_boxes,
                        const StatThresholds& t);

/// Streaming form of RunFilters: push frames in order, then supply the text
/// boxes for the sampled frames.
class FilterAccumulator {
 public:
  explicit FilterAccumulator(const StatThresholds& t);

  void Push(const io::Frame& frame);
  /// Whether the next pushed frame goes to the text detector.
  bool NextIsTextSample() const;
  int64_t size() const { return count_; }

  /// Throws EmptyClip with no frames and InvalidArgument when the box lists
  /// do not match the sampled frames.
  FilterReport Finish(std::span<const std::vector<TextBox>> sampled_boxes) const;

 private:
  StatThresholds t_;
  int64_t count_ = 0;
  std::array<std::vector<bool>, 4> flags_;
  std::vector<std::pair<int, int>> sample_dims_;
};

/// OCR-style detector behind a provider: one box list per input frame.
class TextDetectionProvider {
 public:
  virtual ~TextDetectionProvider() = default;
  virtual std::vector<std::vector<TextBox>> Detect(
      std::string_view clip_id, std::span<const io::Frame> frames) = 0;
};

/// Set runs of a flag bitmap as (start, length) pairs.
std::vector<std::pair<int64_t, int64_t>> EncodeRuns(const std::vector<bool>& flags);
std::vector<bool> DecodeRuns(const std::vector<std::pair<int64_t, int64_t>>& runs,
                             int64_t total);

}  // namespace uvcurate::filters
