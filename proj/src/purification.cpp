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

#include "uvcurate/purification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "uvcurate/error.hpp"

namespace uvcurate::purify {

std::optional<size_t> AttributeIndex(std::string_view name) {
  for (size_t i = 0; i < kAttributeNames.size(); ++i) {
    if (kAttributeNames[i] == name) return i;
  }
  return std::nullopt;
}

void PurifyThresholds::Validate() const {
  if (!(motion_min < motion_max)) {
    throw Error(ErrorCode::kConfigError, "motion_min must be < motion_max");
  }
  if (flow_sample_interval < 1 || flow_downscale < kBlockSize) {
    throw Error(ErrorCode::kConfigError,
                "flow_sample_interval must be >= 1 and flow_downscale >= 16");
  }
}

LumaPlane DownscaledLuma(const io::Frame& frame, int max_long_edge) {
  const int long_edge = std::max(frame.width, frame.height);
  LumaPlane out;
  if (long_edge <= max_long_edge) {
    out.width = frame.width;
    out.height = frame.height;
    out.pixels = io::GrayPlane(frame);
    return out;
  }
  out.width = std::max<int>(1, static_cast<int64_t>(frame.width) * max_long_edge /
                                   long_edge);
  out.height = std::max<int>(1, static_cast<int64_t>(frame.height) *
                                    max_long_edge / long_edge);
  out.pixels.resize(static_cast<size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    const int sy = static_cast<int>(static_cast<int64_t>(y) * frame.height /
                                    out.height);
    for (int x = 0; x < out.width; ++x) {
      const int sx = static_cast<int>(static_cast<int64_t>(x) * frame.width /
                                      out.width);
      const io::Rgb c = frame.at(sx, sy);
      out.pixels[static_cast<size_t>(y) * out.width + x] = io::GrayOf(c.r, c.g, c.b);
    }
  }
  return out;
}

double BlockField::MeanMagnitude() const {
  if (vectors.empty()) return 0.0;
  double total = 0;
  for (const auto& v : vectors) {
    total += std::sqrt(static_cast<double>(v.dx * v.dx + v.dy * v.dy));
  }
  return total / static_cast<double>(vectors.size());
}

namespace {

// SAD between the block at (cx, cy) in `cur` and (px, py) in `prev`, giving
// up once it exceeds `limit`.
int BlockSad(const LumaPlane& prev, const LumaPlane& cur, int px, int py,
             int cx, int cy, int limit) {
  int sad = 0;
  for (int r = 0; r < kBlockSize; ++r) {
    const uint8_t* a = &cur.pixels[static_cast<size_t>(cy + r) * cur.width + cx];
    const uint8_t* b = &prev.pixels[static_cast<size_t>(py + r) * prev.width + px];
    for (int c = 0; c < kBlockSize; ++c) sad += std::abs(a[c] - b[c]);
    if (sad > limit) return sad;
  }
  return sad;
}

}  // namespace

BlockField MatchBlocks(const LumaPlane& prev, const LumaPlane& cur) {
  if (prev.width != cur.width || prev.height != cur.height) {
    throw Error(ErrorCode::kDimensionMismatch, "motion planes differ in size");
  }
  BlockField field;
  field.blocks_x = cur.width / kBlockSize;
  field.blocks_y = cur.height / kBlockSize;
  field.vectors.reserve(static_cast<size_t>(field.blocks_x) * field.blocks_y);

  for (int by = 0; by < field.blocks_y; ++by) {
    for (int bx = 0; bx < field.blocks_x; ++bx) {
      const int cx = bx * kBlockSize, cy = by * kBlockSize;
      int best_sad = std::numeric_limits<int>::max();
      int best_mag = 0;
      MotionVector best;
      // Row-major candidate order; a later candidate wins only on a strictly
      // smaller SAD or an equal SAD with strictly smaller magnitude.
      for (int dy = -kSearchRadius; dy <= kSearchRadius; ++dy) {
        const int py = cy + dy;
        if (py < 0 || py + kBlockSize > prev.height) continue;
        for (int dx = -kSearchRadius; dx <= kSearchRadius; ++dx) {
          const int px = cx + dx;
          if (px < 0 || px + kBlockSize > prev.width) continue;
          const int sad = BlockSad(prev, cur, px, py, cx, cy, best_sad);
          const int mag = dx * dx + dy * dy;
          if (sad < best_sad || (sad == best_sad && mag < best_mag)) {
            best_sad = sad;
            best_mag = mag;
            best = {dx, dy};
          }
        }
      }
      field.vectors.push_back(best);
    }
  }
  return field;
}

std::vector<std::pair<size_t, size_t>> MotionPairs(size_t frame_count,
                                                   int interval) {
  std::vector<std::pair<size_t, size_t>> pairs;
  const size_t step = static_cast<size_t>(std::max(1, interval));
  for (size_t i = 0; i + step < frame_count; i += step) {
    pairs.emplace_back(i, i + step);
  }
  if (pairs.empty() && frame_count >= 2) pairs.emplace_back(0, frame_count - 1);
  return pairs;
}

double MotionScore(std::span<const io::Frame> frames,
                   const PurifyThresholds& params) {
  return MotionScore(
      frames.size(), [&](size_t i) -> const io::Frame& { return frames[i]; }, params);
}

double MotionScore(size_t frame_count, const FrameAt& frame_at,
                   const PurifyThresholds& params) {
  if (frame_count < 2) {
    throw Error(ErrorCode::kTooFewFrames,
                std::to_string(frame_count) + " frame(s)");
  }
  const auto pairs = MotionPairs(frame_count, params.flow_sample_interval);
  double total = 0;
  std::optional<std::pair<size_t, LumaPlane>> cached;
  for (const auto& [a, b] : pairs) {
    LumaPlane prev = cached && cached->first == a
                         ? std::move(cached->second)
                         : DownscaledLuma(frame_at(a), params.flow_downscale);
    LumaPlane cur = DownscaledLuma(frame_at(b), params.flow_downscale);
    total += MatchBlocks(prev, cur).MeanMagnitude();
    cached.emplace(b, std::move(cur));
  }
  return total / static_cast<double>(pairs.size());
}

namespace {

void AppendReasons(const ScoreSet& s, const PurifyThresholds& t,
                   std::vector<std::string>& reasons) {
  if (s.vtss && !(*s.vtss >= t.vtss_min)) reasons.emplace_back("vtss");
  if (s.motion && !(*s.motion >= t.motion_min && *s.motion <= t.motion_max)) {
    reasons.emplace_back("motion");
  }
  if (s.caption_sim && !(*s.caption_sim >= t.caption_sim_min)) {
    reasons.emplace_back("caption_sim");
  }
  if (s.attributes) {
    for (size_t i = 0; i < kAttributeCount; ++i) {
      if ((*s.attributes)[i]) {
        reasons.push_back("attribute:" + std::string(kAttributeNames[i]));
      }
    }
  }
}

}  // namespace

GateResult GateClip(const ScoreSet& scores, const PurifyThresholds& t) {
  if (!scores.complete()) {
    std::string missing;
    if (!scores.vtss) missing += " vtss";
    if (!scores.motion) missing += " motion";
    if (!scores.caption_sim) missing += " caption_sim";
    if (!scores.attributes) missing += " attributes";
    throw Error(ErrorCode::kIncompleteScores, "missing" + missing);
  }
  return GateAvailable(scores, t);
}

GateResult GateAvailable(const ScoreSet& scores, const PurifyThresholds& t) {
  GateResult r;
  AppendReasons(scores, t, r.reasons);
  r.pass = r.reasons.empty();
  return r;
}

std::vector<size_t> UniformSampleIndices(size_t frame_count, size_t count) {
  std::vector<size_t> out;
  if (frame_count == 0 || count == 0) return out;
  if (count >= frame_count) {
    for (size_t i = 0; i < frame_count; ++i) out.push_back(i);
    return out;
  }
  if (count == 1) return {frame_count / 2};
  for (size_t k = 0; k < count; ++k) {
    // round(k * (n - 1) / (count - 1))
    out.push_back((2 * k * (frame_count - 1) + (count - 1)) / (2 * (count - 1)));
  }
  return out;
}

namespace {

// Everything except motion.
ScoreSet FetchModelScores(std::string_view clip_id, size_t frame_count,
                          const FrameAt& frame_at, const ScoreProviders& providers,
                          std::optional<std::string_view> caption, size_t model_frames) {
  std::vector<io::Frame> sampled;
  for (size_t i : UniformSampleIndices(frame_count, model_frames)) {
    sampled.push_back(frame_at(i));
  }
  auto require = [&](auto* provider, const char* kind) {
    if (provider == nullptr) {
      throw Error(ErrorCode::kProviderUnavailable,
                  std::string("no ") + kind + " provider configured");
    }
  };

  ScoreSet s;
  require(providers.vtss, "vtss");
  s.vtss = providers.vtss->Vtss(clip_id, sampled);
  require(providers.attributes, "attributes");
  s.attributes = providers.attributes->Judge(clip_id, sampled);
  if (caption) {
    require(providers.similarity, "similarity");
    s.caption_sim = providers.similarity->Similarity(clip_id, sampled, *caption);
  }
  return s;
}

}  // namespace

ScoreSet FetchScores(std::string_view clip_id, std::span<const io::Frame> frames,
                     const ScoreProviders& providers,
                     const PurifyThresholds& params,
                     std::optional<std::string_view> caption,
                     size_t model_frames) {
  const FrameAt frame_at = [&](size_t i) -> const io::Frame& { return frames[i]; };
  ScoreSet s = FetchModelScores(clip_id, frames.size(), frame_at, providers, caption,
                                model_frames);
  s.motion = providers.flow ? providers.flow->Motion(clip_id, frames)
                            : MotionScore(frames.size(), frame_at, params);
  return s;
}

ScoreSet FetchScores(std::string_view clip_id, size_t frame_count,
                     const FrameAt& frame_at, const ScoreProviders& providers,
                     const PurifyThresholds& params,
                     std::optional<std::string_view> caption,
                     size_t model_frames) {
  if (providers.flow) {
    throw Error(ErrorCode::kInvalidArgument,
                "a flow provider needs the whole clip; use the span form");
  }
  ScoreSet s = FetchModelScores(clip_id, frame_count, frame_at, providers, caption,
                                model_frames);
  s.motion = MotionScore(frame_count, frame_at, params);
  return s;
}

}  // namespace uvcurate::purify
