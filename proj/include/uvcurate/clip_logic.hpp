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

// Duration classes and frame-range arithmetic for clips: the short/long
// split, short windows cut out of long clips, and the centred training
// sub-clip sampler.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uvcurate::clips {

enum class ClipSet { kShort, kLong, kDiscard };

std::string_view ClipSetName(ClipSet s);
ClipSet ParseClipSet(std::string_view name);

inline constexpr double kShortMinSeconds = 3.0;
inline constexpr double kShortMaxSeconds = 10.0;
inline constexpr double kSideWindowAboveSeconds = 60.0;
inline constexpr int kWindowSeconds = 10;

struct ClipRecord {
  std::string id;
  std::string source_id;
  int64_t start_frame = 0;
  int64_t end_frame = 0;  // exclusive
  int fps_num = 30;
  int fps_den = 1;
  int width = 0;
  int height = 0;
  ClipSet set = ClipSet::kDiscard;

  int64_t frames() const { return end_frame - start_frame; }
  double duration_s() const {
    return static_cast<double>(frames()) * fps_den / fps_num;
  }
  bool operator==(const ClipRecord&) const = default;
};

/// [3, 10] seconds is short, above 10 long, below 3 discarded.
ClipSet Classify(double duration_s);

/// Same rule evaluated exactly on the frame-count / frame-rate rational.
ClipSet ClassifyFrames(int64_t frames, int fps_num, int fps_den);

/// Fills in `set` from the frame range.
ClipRecord WithSet(ClipRecord clip);

/// Frames in one extracted window: the longest span not exceeding 10 s.
int64_t WindowFrames(int fps_num, int fps_den);

enum class SideAnchor { kEdges, kQuarterCenters };

/// Short windows taken from a long clip: the centred window, plus one per
/// side when the clip runs over 60 s. Ids are `<parent>.w<k>` in start order.
std::vector<ClipRecord> ExtractShortsFromLong(const ClipRecord& long_clip,
                                              SideAnchor anchor = SideAnchor::kEdges);

struct FrameRange {
  int64_t start = 0;
  int64_t end = 0;
  bool operator==(const FrameRange&) const = default;
};

/// Contiguous window of min(n, target) frames centred in [0, n), remainder
/// biased left.
FrameRange SubclipSample(int64_t n_frames, int64_t target_frames);

}  // namespace uvcurate::clips
