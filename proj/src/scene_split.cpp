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

#include "uvcurate/scene_split.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "uvcurate/error.hpp"

namespace uvcurate::split {

void SplitParams::Validate() const {
  if (window_radius < 1) {
    throw Error(ErrorCode::kConfigError, "window_radius must be >= 1");
  }
  if (min_scene_len < 2) {
    throw Error(ErrorCode::kConfigError, "min_scene_len must be >= 2");
  }
  if (!(adaptive_threshold > 0) || !(min_content_score > 0) ||
      !(dissolve_sim_threshold > 0)) {
    throw Error(ErrorCode::kConfigError, "split thresholds must be positive");
  }
}

std::vector<std::pair<int64_t, int64_t>> CutList::Segments() const {
  std::vector<std::pair<int64_t, int64_t>> out;
  int64_t start = 0;
  for (int64_t c : cuts) {
    out.emplace_back(start, c);
    start = c;
  }
  if (n_frames > start) out.emplace_back(start, n_frames);
  return out;
}

Hsv RgbToHsv(io::Rgb c) {
  const int r = c.r, g = c.g, b = c.b;
  const int mx = std::max({r, g, b});
  const int mn = std::min({r, g, b});
  const int delta = mx - mn;
  Hsv out;
  out.v = mx;
  if (mx == 0) return out;
  out.s = (2 * 255 * delta + mx) / (2 * mx);
  if (delta == 0) return out;
  int h6;  // hue in units of delta / 6 of a turn
  if (mx == r) {
    h6 = g - b;
  } else if (mx == g) {
    h6 = 2 * delta + (b - r);
  } else {
    h6 = 4 * delta + (r - g);
  }
  if (h6 < 0) h6 += 6 * delta;
  out.h = ((512 * h6 + 6 * delta) / (12 * delta)) % 256;
  return out;
}

namespace {

std::vector<Hsv> ToHsv(const io::Frame& f) {
  std::vector<Hsv> out(f.pixel_count());
  const uint8_t* p = f.rgb.data();
  for (auto& px : out) {
    px = RgbToHsv({p[0], p[1], p[2]});
    p += 3;
  }
  return out;
}

double MeanDifference(const std::vector<Hsv>& a, const std::vector<Hsv>& b) {
  int64_t total = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int dh = std::abs(a[i].h - b[i].h);
    dh = std::min(dh, 256 - dh);
    total += dh + std::abs(a[i].s - b[i].s) + std::abs(a[i].v - b[i].v);
  }
  return static_cast<double>(total) / (3.0 * static_cast<double>(a.size()));
}

void CheckSameSize(const io::Frame& a, const io::Frame& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.width) + "x" + std::to_string(a.height) +
                    " vs " + std::to_string(b.width) + "x" +
                    std::to_string(b.height));
  }
}

}  // namespace

double ContentScore(const io::Frame& prev, const io::Frame& cur) {
  CheckSameSize(prev, cur);
  return MeanDifference(ToHsv(prev), ToHsv(cur));
}

void ScoreAccumulator::Push(const io::Frame& frame) {
  std::vector<Hsv> hsv = ToHsv(frame);
  if (scores_.empty()) {
    scores_.push_back(0.0);
  } else {
    if (frame.width != width_ || frame.height != height_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "frame " + std::to_string(frame.index) +
                      " changes stream dimensions");
    }
    scores_.push_back(MeanDifference(prev_, hsv));
  }
  width_ = frame.width;
  height_ = frame.height;
  prev_ = std::move(hsv);
}

std::vector<double> ContentScores(std::span<const io::Frame> frames) {
  ScoreAccumulator acc;
  for (const auto& f : frames) acc.Push(f);
  return acc.scores();
}

CutList DetectCuts(std::span<const double> scores, const SplitParams& params) {
  params.Validate();
  const int64_t n = static_cast<int64_t>(scores.size());
  const int64_t w = params.window_radius;
  const int64_t min_len = params.min_scene_len;

  CutList out;
  out.n_frames = n;
  int64_t last_cut = 0;
  for (int64_t i = 1; i < n; ++i) {
    double sum = 0;
    int count = 0;
    for (int64_t j = std::max<int64_t>(0, i - w); j <= std::min(n - 1, i + w);
         ++j) {
      if (j == i) continue;
      sum += scores[j];
      ++count;
    }
    const double mean = std::max(count > 0 ? sum / count : 0.0, 1e-9);
    const double ratio = scores[i] / mean;
    if (ratio >= params.adaptive_threshold &&
        scores[i] >= params.min_content_score && i - last_cut >= min_len) {
      out.cuts.push_back(i);
      last_cut = i;
    }
  }
  // The final shot must also reach the minimum length.
  while (!out.cuts.empty() && n - out.cuts.back() < min_len) {
    out.cuts.pop_back();
  }
  return out;
}

namespace {

void CheckUnitNorm(std::span<const std::vector<double>> vectors) {
  for (const auto& v : vectors) {
    double norm2 = 0;
    for (double x : v) norm2 += x * x;
    if (std::abs(norm2 - 1.0) > 1e-3) {
      throw Error(ErrorCode::kProviderMalformedResponse,
                  "embedding is not unit norm (|v|^2 = " +
                      std::to_string(norm2) + ")");
    }
  }
}

}  // namespace

double MeanCrossSimilarity(std::span<const std::vector<double>> first,
                           std::span<const std::vector<double>> last) {
  CheckUnitNorm(first);
  CheckUnitNorm(last);
  double total = 0;
  for (const auto& a : first) {
    for (const auto& b : last) {
      if (a.size() != b.size() || a.empty()) {
        throw Error(ErrorCode::kProviderMalformedResponse,
                    "embedding dimensions differ");
      }
      double dot = 0;
      for (size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
      total += std::clamp(dot, -1.0, 1.0);
    }
  }
  return total / static_cast<double>(first.size() * last.size());
}

DissolveResult DissolveFlag(std::span<const io::Frame> clip,
                            EmbeddingProvider& embedder,
                            const SplitParams& params,
                            std::string_view clip_id) {
  constexpr size_t k = kDissolveEdgeFrames;
  if (clip.size() < 2 * k) {
    throw Error(ErrorCode::kShortClip, std::to_string(clip.size()) +
                                           " frames, need " +
                                           std::to_string(2 * k));
  }
  std::vector<io::Frame> edges(clip.begin(), clip.begin() + k);
  edges.insert(edges.end(), clip.end() - k, clip.end());
  const auto vectors = embedder.Embed(clip_id, edges);
  if (vectors.size() != edges.size()) {
    throw Error(ErrorCode::kProviderMalformedResponse,
                "expected " + std::to_string(edges.size()) + " embeddings, got " +
                    std::to_string(vectors.size()));
  }
  DissolveResult r;
  r.similarity = MeanCrossSimilarity(std::span(vectors).first(k),
                                     std::span(vectors).last(k));
  r.flagged = r.similarity < params.dissolve_sim_threshold;
  return r;
}

}  // namespace uvcurate::split
