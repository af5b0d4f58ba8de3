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

// Shot segmentation. Pass one scores every consecutive frame pair by mean HSV
// difference; pass two divides each score by the mean of its neighbours
// (centre excluded) and cuts where both the ratio and the raw score are high.
// Dissolves that slip past the ratio test are caught afterwards by comparing
// embeddings of a clip's first and last five frames.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "uvcurate/frame_io.hpp"

namespace uvcurate::split {

struct SplitParams {
  double adaptive_threshold = 3.0;
  double min_content_score = 15.0;
  int window_radius = 2;
  int min_scene_len = 15;
  double dissolve_sim_threshold = 0.5;

  void Validate() const;
  bool operator==(const SplitParams&) const = default;
};

struct CutList {
  std::vector<int64_t> cuts;  // first frame of each new shot
  int64_t n_frames = 0;

  /// Half-open [start, end) ranges between cuts.
  std::vector<std::pair<int64_t, int64_t>> Segments() const;
  bool operator==(const CutList&) const = default;
};

/// 8-bit HSV; hue spans the full 0..255 circle.
struct Hsv {
  int h = 0;
  int s = 0;
  int v = 0;
};
Hsv RgbToHsv(io::Rgb c);

/// Mean over pixels of (|dH| + |dS| + |dV|) / 3, hue wrapped on 256 steps.
double ContentScore(const io::Frame& prev, const io::Frame& cur);

/// Incremental first pass: push frames in order, read back one score per
/// frame with scores[0] = 0.
class ScoreAccumulator {
 public:
  void Push(const io::Frame& frame);
  const std::vector<double>& scores() const { return scores_; }

 private:
  std::vector<Hsv> prev_;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> scores_;
};

std::vector<double> ContentScores(std::span<const io::Frame> frames);

/// Second pass over a complete score vector.
CutList DetectCuts(std::span<const double> scores, const SplitParams& params);

/// Image embedder (e.g. a self-supervised vision backbone behind a provider).
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One vector per input frame, expected to be unit norm.
  virtual std::vector<std::vector<double>> Embed(
      std::string_view clip_id, std::span<const io::Frame> frames) = 0;
};

struct DissolveResult {
  double similarity = 0;
  bool flagged = false;
  bool operator==(const DissolveResult&) const = default;
};

/// Mean of the |first| x |last| pairwise cosine similarities of unit
/// vectors (plain dot products, clamped to [-1, 1]).
double MeanCrossSimilarity(std::span<const std::vector<double>> first,
                           std::span<const std::vector<double>> last);

inline constexpr int kDissolveEdgeFrames = 5;

/// Throws ShortClip below 10 frames and ProviderMalformedResponse when the
/// embedder returns the wrong number of vectors.
DissolveResult DissolveFlag(std::span<const io::Frame> clip,
                            EmbeddingProvider& embedder,
                            const SplitParams& params,
                            std::string_view clip_id = "");

}  // namespace uvcurate::split
