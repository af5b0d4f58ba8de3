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

#include "uvcurate/clip_logic.hpp"

#include <algorithm>

#include "uvcurate/error.hpp"

namespace uvcurate::clips {

std::string_view ClipSetName(ClipSet s) {
  switch (s) {
    case ClipSet::kShort: return "short";
    case ClipSet::kLong: return "long";
    case ClipSet::kDiscard: return "discard";
  }
  return "discard";
}

ClipSet ParseClipSet(std::string_view name) {
  if (name == "short") return ClipSet::kShort;
  if (name == "long") return ClipSet::kLong;
  if (name == "discard") return ClipSet::kDiscard;
  throw Error(ErrorCode::kSchemaViolation, "unknown clip set '" +
                                               std::string(name) + "'");
}

ClipSet Classify(double duration_s) {
  if (!(duration_s > 0)) {
    throw Error(ErrorCode::kNonPositiveDuration, std::to_string(duration_s));
  }
  if (duration_s < kShortMinSeconds) return ClipSet::kDiscard;
  if (duration_s <= kShortMaxSeconds) return ClipSet::kShort;
  return ClipSet::kLong;
}

ClipSet ClassifyFrames(int64_t frames, int fps_num, int fps_den) {
  if (frames <= 0 || fps_num <= 0 || fps_den <= 0) {
    throw Error(ErrorCode::kNonPositiveDuration,
                std::to_string(frames) + " frames");
  }
  // duration = frames * den / num, compared without rounding.
  const int64_t scaled = frames * fps_den;
  if (scaled < int64_t{3} * fps_num) return ClipSet::kDiscard;
  if (scaled <= int64_t{10} * fps_num) return ClipSet::kShort;
  return ClipSet::kLong;
}

ClipRecord WithSet(ClipRecord clip) {
  clip.set = ClassifyFrames(clip.frames(), clip.fps_num, clip.fps_den);
  return clip;
}

int64_t WindowFrames(int fps_num, int fps_den) {
  return int64_t{kWindowSeconds} * fps_num / fps_den;
}

std::vector<ClipRecord> ExtractShortsFromLong(const ClipRecord& long_clip,
                                              SideAnchor anchor) {
  if (ClassifyFrames(long_clip.frames(), long_clip.fps_num,
                     long_clip.fps_den) != ClipSet::kLong) {
    throw Error(ErrorCode::kNotLongClip,
                long_clip.id + " lasts " + std::to_string(long_clip.duration_s()) +
                    " s");
  }
  const int64_t n = long_clip.frames();
  const int64_t len = WindowFrames(long_clip.fps_num, long_clip.fps_den);
  const int64_t s = long_clip.start_frame;

  std::vector<int64_t> starts = {s + (n - len) / 2};
  const bool sides = n * long_clip.fps_den >
                     int64_t{60} * long_clip.fps_num;
  if (sides) {
    if (anchor == SideAnchor::kEdges) {
      starts.push_back(s);
      starts.push_back(s + n - len);
    } else {
      starts.push_back(s + (n - 2 * len) / 4);
      starts.push_back(s + (3 * n - 2 * len) / 4);
    }
  }
  std::sort(starts.begin(), starts.end());

  std::vector<ClipRecord> out;
  for (size_t k = 0; k < starts.size(); ++k) {
    ClipRecord c = long_clip;
    c.id = long_clip.id + ".w" + std::to_string(k);
    c.start_frame = starts[k];
    c.end_frame = starts[k] + len;
    c.set = ClipSet::kShort;
    out.push_back(std::move(c));
  }
  return out;
}

FrameRange SubclipSample(int64_t n_frames, int64_t target_frames) {
  if (n_frames < 1 || target_frames < 1) {
    throw Error(ErrorCode::kInvalidArgument, "frame counts must be positive");
  }
  const int64_t t = std::min(n_frames, target_frames);
  const int64_t start = (n_frames - t) / 2;
  return {start, start + t};
}

}  // namespace uvcurate::clips
