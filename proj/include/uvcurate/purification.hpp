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

// Model-based purification gates. Suitability score, caption similarity and
// the low-quality attribute judgments come from external providers; motion is
// measured here with exhaustive block matching unless a flow provider is
// configured.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uvcurate/frame_io.hpp"

namespace uvcurate::purify {

inline constexpr size_t kAttributeCount = 16;

/// Fixed, ordered attribute registry. Names are part of the wire protocol.
inline constexpr std::array<std::string_view, kAttributeCount> kAttributeNames = {
    "Subtitles",       "AbnormalColorPatches", "GreenScreen",
    "BlueScreen",      "TransitionEffects",    "Watermarks",
    "Stickers",        "Borders",              "SplitScreens",
    "ScreenRecordings", "PictureInPicture",    "StillVideo",
    "BlurredVideo",    "ScrambledVideo",       "SolidColorBackgrounds",
    "Other"};

std::optional<size_t> AttributeIndex(std::string_view name);

using Attributes = std::array<bool, kAttributeCount>;

struct ScoreSet {
  std::optional<double> vtss;
  std::optional<double> motion;
  std::optional<double> caption_sim;
  std::optional<Attributes> attributes;

  bool complete() const {
    return vtss && motion && caption_sim && attributes;
  }
  bool operator==(const ScoreSet&) const = default;
};

struct PurifyThresholds {
  double vtss_min = 0.01;
  double motion_min = 0.1;
  double motion_max = 100.0;
  double caption_sim_min = 0.2;
  int flow_sample_interval = 8;
  int flow_downscale = 512;

  void Validate() const;
  bool operator==(const PurifyThresholds&) const = default;
};

// ---------------------------------------------------------------- motion

inline constexpr int kBlockSize = 16;
inline constexpr int kSearchRadius = 8;

struct MotionVector {
  int dx = 0;
  int dy = 0;
  bool operator==(const MotionVector&) const = default;
};

/// Gray plane of a frame, optionally reduced by nearest neighbour so that
/// the long edge does not exceed `max_long_edge`.
struct LumaPlane {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;
};
LumaPlane DownscaledLuma(const io::Frame& frame, int max_long_edge);

/// Motion field over whole 16x16 blocks of `cur`: each block's best match
/// in `prev` within +-8 pixels (minimum SAD, then smallest |d|, then
/// row-major order of (dy, dx)). Blocks are row-major.
struct BlockField {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<MotionVector> vectors;
  double MeanMagnitude() const;
};
BlockField MatchBlocks(const LumaPlane& prev, const LumaPlane& cur);

/// Frame pairs compared by the motion score.
std::vector<std::pair<size_t, size_t>> MotionPairs(size_t frame_count,
                                                   int interval);

/// Mean block displacement, averaged over the sampled pairs. Throws
/// TooFewFrames below two frames.
double MotionScore(std::span<const io::Frame> frames,
                   const PurifyThresholds& params);

/// Random access to the frames of a clip; only indices named by
/// MotionPairs and UniformSampleIndices are requested.
using FrameAt = std::function<const io::Frame&(size_t)>;

double MotionScore(size_t frame_count, const FrameAt& frame_at,
                   const PurifyThresholds& params);

// ----------------------------------------------------------------- gating

struct GateResult {
  bool pass = false;
  std::vector<std::string> reasons;  // "vtss", "motion", "caption_sim", "attribute:<Name>"
};

/// Strict gate over a complete ScoreSet; throws IncompleteScores otherwise.
GateResult GateClip(const ScoreSet& scores, const PurifyThresholds& t);

/// Evaluates only the gates whose scores are present. Used before captions
/// (and hence caption similarity) exist.
GateResult GateAvailable(const ScoreSet& scores, const PurifyThresholds& t);

// -------------------------------------------------------------- providers

class VtssProvider {
 public:
  virtual ~VtssProvider() = default;
  virtual double Vtss(std::string_view clip_id,
                      std::span<const io::Frame> frames) = 0;
};

class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual double Similarity(std::string_view clip_id,
                            std::span<const io::Frame> frames,
                            std::string_view caption) = 0;
};

class AttributeProvider {
 public:
  virtual ~AttributeProvider() = default;
  virtual Attributes Judge(std::string_view clip_id,
                           std::span<const io::Frame> frames) = 0;
};

/// Optional replacement for the native motion scorer.
class FlowProvider {
 public:
  virtual ~FlowProvider() = default;
  virtual double Motion(std::string_view clip_id,
                        std::span<const io::Frame> frames) = 0;
};

struct ScoreProviders {
  VtssProvider* vtss = nullptr;
  AttributeProvider* attributes = nullptr;
  SimilarityProvider* similarity = nullptr;
  FlowProvider* flow = nullptr;
};

/// Frames handed to model providers: `count` indices spread evenly over the
/// clip, first and last included.
std::vector<size_t> UniformSampleIndices(size_t frame_count, size_t count);

/// Assembles the ScoreSet. Motion is always filled (natively when no flow
/// provider is set); vtss and attributes need their providers; the
/// similarity score is fetched only when a caption is supplied. Throws
/// ProviderUnavailable when a required provider is missing or failing.
ScoreSet FetchScores(std::string_view clip_id, std::span<const io::Frame> frames,
                     const ScoreProviders& providers,
                     const PurifyThresholds& params,
                     std::optional<std::string_view> caption = std::nullopt,
                     size_t model_frames = 8);
/// Same, reading frames on demand. A flow provider needs the whole clip, so
/// setting one here is an InvalidArgument.
ScoreSet FetchScores(std::string_view clip_id, size_t frame_count,
                     const FrameAt& frame_at, const ScoreProviders& providers,
                     const PurifyThresholds& params,
                     std::optional<std::string_view> caption = std::nullopt,
                     size_t model_frames = 8);

}  // namespace uvcurate::purify
