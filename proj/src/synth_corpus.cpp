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

#include "uvcurate/synth_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uvcurate/error.hpp"
#include "uvcurate/frame_io.hpp"
#include "uvcurate/rng.hpp"

namespace uvcurate::synth {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 9> kKindNames = {
    "TextOverlay",  "BlackBorder",  "Overexposure", "Underexposure", "GrayFrames",
    "StaticMotion", "FastJitter",   "HardCut",      "Dissolve"};

constexpr int kLumaLo = 60;
constexpr int kLumaHi = 190;
constexpr int kCoarseCell = 32;
constexpr int kFineCell = 12;

struct Chroma {
  int u = 128;
  int v = 128;
};

// Six hues 60 degrees apart at chroma radius 40.
constexpr std::array<Chroma, 6> kPalettes = {
    {{168, 128}, {148, 163}, {108, 163}, {88, 128}, {108, 93}, {148, 93}}};
constexpr int kCutPaletteStep = 3;       // opposite hue
constexpr int kDissolvePaletteStep = 2;  // 120 degrees; the blend stays saturated

struct Yuv {
  uint8_t y, u, v;
};
constexpr Yuv kBlack = {16, 128, 128};
constexpr Yuv kWhite = {235, 128, 128};
constexpr Yuv kYellow = {210, 16, 146};

enum Label : uint8_t { kContent = 0, kLabelBlack, kLabelWhite, kLabelYellow };

Yuv LabelColor(uint8_t label) {
  switch (label) {
    case kLabelBlack: return kBlack;
    case kLabelWhite: return kWhite;
    default: return kYellow;
  }
}

[[noreturn]] void Contradiction(const std::string& id, const std::string& msg) {
  throw Error(ErrorCode::kContradictorySpec, id + ": " + msg);
}

bool IsPixelKind(DefectKind k) {
  return k == DefectKind::kTextOverlay || k == DefectKind::kBlackBorder ||
         k == DefectKind::kOverexposure || k == DefectKind::kUnderexposure ||
         k == DefectKind::kGrayFrames;
}
bool IsMotionKind(DefectKind k) {
  return k == DefectKind::kStaticMotion || k == DefectKind::kFastJitter;
}
bool IsTransition(DefectKind k) {
  return k == DefectKind::kHardCut || k == DefectKind::kDissolve;
}

int FloorDiv(int64_t a, int b) {
  return static_cast<int>(a >= 0 ? a / b : -((-a + b - 1) / b));
}

// Per-pixel statistics of one YUV colour as the filters see it.
struct ColorStats {
  int gray = 0;
  int64_t var9 = 0;
};

ColorStats StatsOf(uint8_t y, uint8_t u, uint8_t v) {
  const io::Rgb c = io::YuvToRgb(y, u, v);
  const int r = c.r, g = c.g, b = c.b, s = r + g + b;
  return {io::GrayOf(c.r, c.g, c.b), 3 * (r * r + g * g + b * b) - s * s};
}

// Range of statistics over every luma the texture can produce at a chroma.
struct ContentBand {
  int gray_min = 255, gray_max = 0;
  int64_t var9_min = INT64_MAX, var9_max = 0;
};

ContentBand BandFor(Chroma c) {
  ContentBand b;
  for (int y = kLumaLo; y <= kLumaHi; ++y) {
    const ColorStats s = StatsOf(static_cast<uint8_t>(y), static_cast<uint8_t>(c.u),
                                 static_cast<uint8_t>(c.v));
    b.gray_min = std::min(b.gray_min, s.gray);
    b.gray_max = std::max(b.gray_max, s.gray);
    b.var9_min = std::min(b.var9_min, s.var9);
    b.var9_max = std::max(b.var9_max, s.var9);
  }
  return b;
}

double VarDivisor(const filters::StatThresholds& t) {
  return t.variance_bessel ? 6.0 : 9.0;
}

// Smallest V offset whose neutral tint keeps the graying score on the same
// side of the threshold as `target`, closest to it.
std::optional<int> TintFor(double target, const filters::StatThresholds& t) {
  const bool want_flag = target < t.gray_variance_min;
  std::optional<int> best;
  double best_dist = 0;
  for (int delta = 0; delta <= 100; ++delta) {
    const ContentBand b = BandFor({128, 128 + delta});
    const double lo = b.var9_min / VarDivisor(t), hi = b.var9_max / VarDivisor(t);
    const bool ok = want_flag ? hi < t.gray_variance_min : lo >= t.gray_variance_min;
    if (!ok) continue;
    const double dist = std::abs((lo + hi) / 2 - target);
    if (!best || dist < best_dist) {
      best = delta;
      best_dist = dist;
    }
  }
  return best;
}

// Layout of the frame sequence: which shot(s) and chroma each frame shows
// and where the texture sits.
struct FramePlan {
  int shot_a = 0;
  int shot_b = 0;       // == shot_a unless blending
  int blend_num = 0;    // weight of shot_b is blend_num / blend_den
  int blend_den = 1;
  Chroma chroma;
  int64_t ox = 0, oy = 0;
  const DefectSpec* pixel_defect = nullptr;
  int tint = -1;        // V offset when grayed
};

class Texture {
 public:
  Texture(uint64_t seed, const std::string& id) : base_(seed ^ Fnv1a64(id)) {}

  uint8_t Luma(int shot, int64_t x, int64_t y) const {
    const int coarse = Octave(shot, 0, kCoarseCell, x, y);
    const int fine = Octave(shot, 1, kFineCell, x, y);
    const int m = (3 * coarse + fine + 2) / 4;
    return static_cast<uint8_t>(kLumaLo + (m * (kLumaHi - kLumaLo) + 127) / 255);
  }

 private:
  int Lattice(int shot, int octave, int cx, int cy) const {
    uint64_t state = base_ ^ (static_cast<uint64_t>(shot) << 56) ^
                     (static_cast<uint64_t>(octave) << 48) ^
                     (static_cast<uint64_t>(static_cast<uint32_t>(cx)) << 24) ^
                     static_cast<uint64_t>(static_cast<uint32_t>(cy));
    SplitMix64(state);
    return static_cast<int>(SplitMix64(state) & 0xFF);
  }

  int Octave(int shot, int octave, int cell, int64_t x, int64_t y) const {
    const int cx = FloorDiv(x, cell), cy = FloorDiv(y, cell);
    const int64_t fx = x - int64_t{cx} * cell, fy = y - int64_t{cy} * cell;
    const int64_t v00 = Lattice(shot, octave, cx, cy);
    const int64_t v10 = Lattice(shot, octave, cx + 1, cy);
    const int64_t v01 = Lattice(shot, octave, cx, cy + 1);
    const int64_t v11 = Lattice(shot, octave, cx + 1, cy + 1);
    const int64_t c = cell;
    const int64_t sum = v00 * (c - fx) * (c - fy) + v10 * fx * (c - fy) +
                        v01 * (c - fx) * fy + v11 * fx * fy;
    return static_cast<int>((sum + c * c / 2) / (c * c));
  }

  uint64_t base_;
};

void ValidateSpec(const ClipSpec& s) {
  if (s.id.empty()) Contradiction("?", "empty id");
  if (s.width < 16 || s.height < 16) Contradiction(s.id, "frame smaller than 16x16");
  if (int64_t{s.width} * s.height > io::kMaxPixels) Contradiction(s.id, "frame too large");
  if (s.frames < 1) Contradiction(s.id, "no frames");
  if (s.fps_num <= 0 || s.fps_den <= 0) Contradiction(s.id, "bad frame rate");
  if (s.palette < 0 || s.palette >= static_cast<int>(kPalettes.size())) {
    Contradiction(s.id, "palette out of range");
  }
  for (const auto& d : s.defects) {
    const std::string what(DefectKindName(d.kind));
    if (d.start < 0 || d.end > s.frames || d.start >= d.end) {
      Contradiction(s.id, what + " range outside the clip");
    }
    const double v = d.severity;
    bool ok = std::isfinite(v);
    switch (d.kind) {
      case DefectKind::kTextOverlay: ok &= v > 0 && v <= 1; break;
      case DefectKind::kBlackBorder: ok &= v > 0 && v < 0.25; break;
      case DefectKind::kOverexposure:
      case DefectKind::kUnderexposure: ok &= v > 0 && v <= 1; break;
      case DefectKind::kGrayFrames: ok &= v >= 0 && v <= 1000; break;
      case DefectKind::kStaticMotion: ok &= v == 0; break;
      case DefectKind::kFastJitter: ok &= v >= 1 && v <= 4096; break;
      case DefectKind::kHardCut:
        ok &= d.end == d.start + 1 && d.start >= 1;
        break;
      case DefectKind::kDissolve: ok &= d.start >= 1 && d.end < s.frames; break;
    }
    if (!ok) Contradiction(s.id, what + " severity or range out of bounds");
    if (d.kind != DefectKind::kTextOverlay && !d.geometry.empty()) {
      Contradiction(s.id, what + " does not take geometry");
    }
  }
  for (size_t i = 0; i < s.defects.size(); ++i) {
    for (size_t j = i + 1; j < s.defects.size(); ++j) {
      const auto& a = s.defects[i];
      const auto& b = s.defects[j];
      const bool overlap = a.start < b.end && b.start < a.end;
      const bool same_family = (IsPixelKind(a.kind) && IsPixelKind(b.kind)) ||
                               (IsMotionKind(a.kind) && IsMotionKind(b.kind)) ||
                               (IsTransition(a.kind) && IsTransition(b.kind));
      if (overlap && same_family) {
        Contradiction(s.id, std::string(DefectKindName(a.kind)) + " and " +
                                std::string(DefectKindName(b.kind)) +
                                " overlap");
      }
    }
  }
}

filters::TextBox DefaultBox(int w, int h, double ratio) {
  const double area = ratio * w * h;
  int bh = std::max(1, static_cast<int>(std::lround(std::sqrt(area / 2))));
  bh = std::min(bh, h);
  int bw = std::max(1, static_cast<int>(std::lround(area / bh)));
  bw = std::min(bw, w);
  const int x0 = (w - bw) / 2, y0 = (h - bh) / 2;
  return {x0, y0, x0 + bw, y0 + bh};
}

// Fills derived geometry and sorts the defect list into a canonical order.
ClipSpec Normalize(ClipSpec s) {
  for (auto& d : s.defects) {
    if (d.kind == DefectKind::kTextOverlay && d.geometry.empty()) {
      d.geometry.push_back(DefaultBox(s.width, s.height, d.severity));
    }
  }
  return s;
}

struct Layout {
  std::vector<FramePlan> frames;
  std::vector<int64_t> cuts;
  std::vector<int> tints;
  bool dissolve = false;
};

// Shot index and content chroma of frame t given the sorted transitions.
void PlaceShots(const std::vector<const DefectSpec*>& transitions, int palette,
                int64_t t, FramePlan& f) {
  int shot = 0;
  for (const DefectSpec* d : transitions) {
    if (t < d->start) break;
    if (d->kind == DefectKind::kDissolve && t < d->end) {
      f.shot_a = shot;
      f.shot_b = shot + 1;
      f.blend_den = static_cast<int>(d->end - d->start + 1);
      f.blend_num = static_cast<int>(t - d->start + 1);
      const Chroma a = kPalettes[palette % 6];
      const Chroma b = kPalettes[(palette + kDissolvePaletteStep) % 6];
      const int L = f.blend_den, k = f.blend_num;
      f.chroma = {(a.u * (L - k) + b.u * k + L / 2) / L,
                  (a.v * (L - k) + b.v * k + L / 2) / L};
      return;
    }
    ++shot;
    palette += d->kind == DefectKind::kHardCut ? kCutPaletteStep : kDissolvePaletteStep;
  }
  f.shot_a = f.shot_b = shot;
  f.chroma = kPalettes[palette % 6];
}

Layout Plan(const ClipSpec& s, uint64_t seed, const TruthParams& p) {
  Layout out;
  out.frames.resize(static_cast<size_t>(s.frames));

  std::vector<const DefectSpec*> transitions;
  for (const auto& d : s.defects) {
    if (IsTransition(d.kind)) transitions.push_back(&d);
  }
  std::sort(transitions.begin(), transitions.end(),
            [](const DefectSpec* a, const DefectSpec* b) { return a->start < b->start; });

  std::map<const DefectSpec*, int> tint_of;
  for (const auto& d : s.defects) {
    if (d.kind != DefectKind::kGrayFrames) continue;
    const auto tint = TintFor(d.severity, p.stat);
    if (!tint) Contradiction(s.id, "no tint reaches graying score " + std::to_string(d.severity));
    tint_of[&d] = *tint;
    out.tints.push_back(*tint);
  }

  Xoshiro256 jitter(seed, s.id + "/jitter");
  int64_t px = 0, py = 0;
  for (int64_t t = 0; t < s.frames; ++t) {
    FramePlan& f = out.frames[static_cast<size_t>(t)];
    bool frozen = false;
    int64_t amplitude = 0;
    for (const auto& d : s.defects) {
      if (t < d.start || t >= d.end) continue;
      if (d.kind == DefectKind::kStaticMotion) frozen = true;
      if (d.kind == DefectKind::kFastJitter) amplitude = std::llround(d.severity);
      if (IsPixelKind(d.kind)) f.pixel_defect = &d;
    }
    if (t > 0 && !frozen) {
      px += s.velocity_x;
      py += s.velocity_y;
    }
    f.ox = px;
    f.oy = py;
    if (amplitude > 0) {
      const uint64_t span = static_cast<uint64_t>(2 * amplitude + 1);
      f.ox += static_cast<int64_t>(jitter.Below(span)) - amplitude;
      f.oy += static_cast<int64_t>(jitter.Below(span)) - amplitude;
    }

    PlaceShots(transitions, s.palette, t, f);
    if (f.pixel_defect && f.pixel_defect->kind == DefectKind::kGrayFrames) {
      f.tint = tint_of.at(f.pixel_defect);
      f.chroma = {128, 128 + f.tint};
    }
  }

  for (const DefectSpec* d : transitions) {
    if (d->kind == DefectKind::kHardCut) out.cuts.push_back(d->start);
    if (d->kind == DefectKind::kDissolve) out.dissolve = true;
  }
  return out;
}

// Which painted colour covers each pixel of a frame.
std::vector<uint8_t> PaintLabels(const ClipSpec& s, const FramePlan& f) {
  const int w = s.width, h = s.height;
  std::vector<uint8_t> labels(static_cast<size_t>(w) * h, kContent);
  const DefectSpec* d = f.pixel_defect;
  if (!d) return labels;
  switch (d->kind) {
    case DefectKind::kTextOverlay:
      for (const auto& b : d->geometry) {
        for (int y = b.y0; y < b.y1; ++y) {
          std::fill_n(labels.begin() + static_cast<size_t>(y) * w + b.x0, b.x1 - b.x0,
                      kLabelYellow);
        }
      }
      break;
    case DefectKind::kBlackBorder: {
      const int dx = static_cast<int>(std::lround(d->severity * w));
      const int dy = static_cast<int>(std::lround(d->severity * h));
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (x < dx || x >= w - dx || y < dy || y >= h - dy) {
            labels[static_cast<size_t>(y) * w + x] = kLabelBlack;
          }
        }
      }
      break;
    }
    case DefectKind::kOverexposure:
    case DefectKind::kUnderexposure: {
      const int64_t n = int64_t{w} * h;
      const int64_t count = std::min<int64_t>(n, std::llround(d->severity * n));
      const int64_t start = (n - count) / (2 * w) * w;
      std::fill_n(labels.begin() + start, count,
                  d->kind == DefectKind::kOverexposure ? kLabelWhite : kLabelBlack);
      break;
    }
    default:
      break;
  }
  return labels;
}

void RenderFrame(const ClipSpec& s, const Texture& tex, const FramePlan& f,
                 const std::vector<uint8_t>& labels, std::vector<uint8_t>& planar) {
  const size_t n = static_cast<size_t>(s.width) * s.height;
  planar.resize(3 * n);
  uint8_t* yp = planar.data();
  uint8_t* up = yp + n;
  uint8_t* vp = up + n;
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const size_t i = static_cast<size_t>(y) * s.width + x;
      if (labels[i] != kContent) {
        const Yuv c = LabelColor(labels[i]);
        yp[i] = c.y;
        up[i] = c.u;
        vp[i] = c.v;
        continue;
      }
      const int64_t tx = x + f.ox, ty = y + f.oy;
      int luma = tex.Luma(f.shot_a, tx, ty);
      if (f.shot_b != f.shot_a) {
        const int lb = tex.Luma(f.shot_b, tx, ty);
        const int L = f.blend_den, k = f.blend_num;
        luma = (luma * (L - k) + lb * k + L / 2) / L;
      }
      yp[i] = static_cast<uint8_t>(luma);
      up[i] = static_cast<uint8_t>(f.chroma.u);
      vp[i] = static_cast<uint8_t>(f.chroma.v);
    }
  }
}

// Decides a threshold comparison over an interval of possible values.
enum class Side { kBelow, kAtOrAbove, kUnknown };
Side Compare(double lo, double hi, double threshold) {
  if (hi < threshold) return Side::kBelow;
  if (lo >= threshold) return Side::kAtOrAbove;
  return Side::kUnknown;
}

struct FrameTruth {
  bool border = false;
  bool exposure = false;
  bool graying = false;
  double text_ratio = 0;
};

FrameTruth JudgeFrame(const ClipSpec& s, const FramePlan& f,
                      const std::vector<uint8_t>& labels, const TruthParams& p,
                      int64_t t) {
  const auto& th = p.stat;
  const int w = s.width, h = s.height;
  const int64_t n = int64_t{w} * h;
  const ContentBand band = BandFor(f.chroma);
  std::array<ColorStats, 4> painted{};
  for (uint8_t l = kLabelBlack; l <= kLabelYellow; ++l) {
    const Yuv c = LabelColor(l);
    painted[l] = StatsOf(c.y, c.u, c.v);
  }
  const filters::BorderDepth d = filters::BorderDepthFor(w, h, th.border_depth_ratio);

  int64_t content = 0, bad = 0, var9 = 0;
  // Exact sums over painted pixels, content pixel counts per region.
  int64_t union_sum = 0, union_content = 0;
  std::array<int64_t, 4> side_sum{}, side_content{};  // top, bottom, left, right
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const uint8_t l = labels[static_cast<size_t>(y) * w + x];
      const bool is_content = l == kContent;
      const int gray = is_content ? 0 : painted[l].gray;
      if (is_content) {
        ++content;
      } else {
        bad += gray > th.exposure_high || gray < th.exposure_low;
        var9 += painted[l].var9;
      }
      const std::array<bool, 4> in_side = {y < d.dy, y >= h - d.dy, x < d.dx,
                                           x >= w - d.dx};
      bool in_union = false;
      for (int k = 0; k < 4; ++k) {
        if (!in_side[k]) continue;
        in_union = true;
        (is_content ? side_content[k] : side_sum[k]) += is_content ? 1 : gray;
      }
      if (in_union) (is_content ? union_content : union_sum) += is_content ? 1 : gray;
    }
  }

  FrameTruth out;
  const std::string where = " at frame " + std::to_string(t);
  if (content > 0) {
    int bad_lumas = 0;
    for (int y = kLumaLo; y <= kLumaHi; ++y) {
      const int g = StatsOf(static_cast<uint8_t>(y), static_cast<uint8_t>(f.chroma.u),
                            static_cast<uint8_t>(f.chroma.v)).gray;
      bad_lumas += g > th.exposure_high || g < th.exposure_low;
    }
    if (bad_lumas != 0 && bad_lumas != kLumaHi - kLumaLo + 1) {
      Contradiction(s.id, "texture exposure is not decidable" + where);
    }
    if (bad_lumas) bad += content;
  }
  out.exposure = static_cast<double>(bad) / static_cast<double>(n) > th.exposure_pixel_ratio;

  const double div = VarDivisor(th) * static_cast<double>(n);
  const Side gray_side =
      Compare(static_cast<double>(var9 + content * band.var9_min) / div,
              static_cast<double>(var9 + content * band.var9_max) / div,
              th.gray_variance_min);
  if (gray_side == Side::kUnknown) Contradiction(s.id, "graying score is not decidable" + where);
  out.graying = gray_side == Side::kBelow;

  Side border_side;
  if (th.border_per_side) {
    const double horiz = static_cast<double>(d.dy) * w;
    const double vert = static_cast<double>(d.dx) * h;
    double lo = INFINITY, hi = INFINITY;
    for (int k = 0; k < 4; ++k) {
      const double area = k < 2 ? horiz : vert;
      lo = std::min(lo, static_cast<double>(side_sum[k] + side_content[k] * band.gray_min) / area);
      hi = std::min(hi, static_cast<double>(side_sum[k] + side_content[k] * band.gray_max) / area);
    }
    border_side = Compare(lo, hi, th.border_mean_max);
  } else {
    const double count = static_cast<double>(int64_t{2} * d.dy * w +
                                             int64_t{2} * d.dx * (h - 2 * d.dy));
    border_side = Compare(
        static_cast<double>(union_sum + union_content * band.gray_min) / count,
        static_cast<double>(union_sum + union_content * band.gray_max) / count,
        th.border_mean_max);
  }
  if (border_side == Side::kUnknown) Contradiction(s.id, "border mean is not decidable" + where);
  out.border = border_side == Side::kBelow;

  if (f.pixel_defect && f.pixel_defect->kind == DefectKind::kTextOverlay) {
    try {
      out.text_ratio = filters::TextUnionRatio(w, h, f.pixel_defect->geometry);
    } catch (const Error& e) {
      Contradiction(s.id, e.what());
    }
  }
  return out;
}

double MeanDisplacement(const Layout& layout, const purify::PurifyThresholds& p) {
  const auto pairs = purify::MotionPairs(layout.frames.size(), p.flow_sample_interval);
  if (pairs.empty()) return 0;
  double total = 0;
  for (auto [a, b] : pairs) {
    const double dx = static_cast<double>(layout.frames[b].ox - layout.frames[a].ox);
    const double dy = static_cast<double>(layout.frames[b].oy - layout.frames[a].oy);
    total += std::hypot(dx, dy);
  }
  return total / static_cast<double>(pairs.size());
}

}  // namespace

std::string_view DefectKindName(DefectKind k) { return kKindNames[static_cast<size_t>(k)]; }

DefectKind ParseDefectKind(std::string_view name) {
  for (size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<DefectKind>(i);
  }
  throw Error(ErrorCode::kSchemaViolation, "unknown defect kind '" + std::string(name) + "'");
}

bool GroundTruth::stat_pass() const {
  return std::all_of(filters.begin(), filters.end(),
                     [](const ExpectedFilter& f) { return f.pass; });
}

GroundTruth Generate(const ClipSpec& input, uint64_t seed, std::ostream& out,
                     const TruthParams& params) {
  ValidateSpec(input);
  const ClipSpec spec = Normalize(input);
  params.stat.Validate();
  const Layout layout = Plan(spec, seed, params);

  GroundTruth truth;
  truth.id = spec.id;
  truth.seed = seed;
  truth.spec = spec;
  truth.cuts = layout.cuts;
  truth.dissolve = layout.dissolve;
  truth.gray_tints = layout.tints;
  truth.motion_displacement = MeanDisplacement(layout, params.purify);
  truth.motion_pass = truth.motion_displacement >= params.purify.motion_min &&
                      truth.motion_displacement <= params.purify.motion_max;
  for (auto& f : truth.filters) f.flags.assign(static_cast<size_t>(spec.frames), false);

  io::StreamMeta meta;
  meta.width = spec.width;
  meta.height = spec.height;
  meta.fps_num = spec.fps_num;
  meta.fps_den = spec.fps_den;
  meta.chroma = io::Chroma::k444;
  io::Y4mWriter writer(out, meta);

  const Texture tex(seed, spec.id);
  const int k = std::max(1, params.stat.text_sample_interval);
  std::vector<uint8_t> planar;
  bool text_on = false;
  for (int64_t t = 0; t < spec.frames; ++t) {
    const FramePlan& f = layout.frames[static_cast<size_t>(t)];
    const std::vector<uint8_t> labels = PaintLabels(spec, f);
    const FrameTruth ft = JudgeFrame(spec, f, labels, params, t);
    const size_t i = static_cast<size_t>(t);
    truth.filters[static_cast<size_t>(filters::Filter::kBorder)].flags[i] = ft.border;
    truth.filters[static_cast<size_t>(filters::Filter::kExposure)].flags[i] = ft.exposure;
    truth.filters[static_cast<size_t>(filters::Filter::kGraying)].flags[i] = ft.graying;
    // Text is only looked at on sampled frames and carried forward.
    if (t % k == 0) text_on = ft.text_ratio > params.stat.text_area_ratio;
    truth.filters[static_cast<size_t>(filters::Filter::kText)].flags[i] = text_on;

    RenderFrame(spec, tex, f, labels, planar);
    writer.WritePlanar(planar);
  }
  for (auto& f : truth.filters) {
    f.pass = filters::AggregateClip(f.flags, params.stat).pass;
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + spec.id);
  return truth;
}

GeneratedClip Generate(const ClipSpec& spec, uint64_t seed, const TruthParams& params) {
  std::ostringstream out(std::ios::binary);
  GeneratedClip clip;
  clip.truth = Generate(spec, seed, out, params);
  const std::string bytes = std::move(out).str();
  clip.y4m.assign(bytes.begin(), bytes.end());
  return clip;
}

double SeverityAtMultiple(DefectKind kind, double multiple, const TruthParams& p) {
  switch (kind) {
    case DefectKind::kTextOverlay: return multiple * p.stat.text_area_ratio;
    case DefectKind::kBlackBorder: return multiple * p.stat.border_depth_ratio;
    case DefectKind::kOverexposure:
    case DefectKind::kUnderexposure: return multiple * p.stat.exposure_pixel_ratio;
    case DefectKind::kGrayFrames: return p.stat.gray_variance_min / multiple;
    case DefectKind::kFastJitter: return multiple * p.purify.motion_max;
    default: return 0;
  }
}

// ------------------------------------------------------------------ corpus

std::vector<ClipSpec> PlanCorpus(const CorpusOptions& o, uint64_t seed,
                                 const TruthParams& p) {
  enum class Variant { kDefective, kCleanPixels, kCleanFrames };
  struct Category {
    std::optional<DefectKind> kind;
    Variant variant = Variant::kDefective;
  };
  std::vector<Category> cycle;
  for (DefectKind k : {DefectKind::kTextOverlay, DefectKind::kBlackBorder,
                       DefectKind::kOverexposure, DefectKind::kUnderexposure,
                       DefectKind::kGrayFrames}) {
    for (Variant v : {Variant::kDefective, Variant::kCleanPixels, Variant::kCleanFrames}) {
      cycle.push_back({k, v});
    }
  }
  cycle.push_back({});
  cycle.push_back({});
  if (o.transitions) {
    for (DefectKind k : {DefectKind::kHardCut, DefectKind::kDissolve,
                         DefectKind::kStaticMotion, DefectKind::kFastJitter}) {
      cycle.push_back({k, Variant::kDefective});
    }
  }

  const double r = p.stat.bad_frame_ratio;
  const int interval = std::max(1, p.stat.text_sample_interval);
  const int digits = std::max<int>(3, static_cast<int>(std::to_string(std::max(0, o.clips - 1)).size()));
  Xoshiro256 rng(seed, "plan");
  std::vector<ClipSpec> specs;
  for (int i = 0; i < o.clips; ++i) {
    const Category& cat = cycle[static_cast<size_t>(i) % cycle.size()];
    ClipSpec s;
    std::string id = std::to_string(i);
    s.id = std::string(static_cast<size_t>(digits) - std::min<size_t>(id.size(), digits), '0') + id;
    s.width = o.width;
    s.height = o.height;
    s.frames = o.frames;
    s.palette = static_cast<int>(rng.Below(kPalettes.size()));
    s.velocity_x = rng.Below(2) ? 1 : -1;
    s.velocity_y = static_cast<int>(rng.Below(3)) - 1;
    const bool at_end = rng.Below(2) == 1;
    const int64_t n = s.frames;

    if (cat.kind && IsPixelKind(*cat.kind)) {
      const bool frames_defective = cat.variant != Variant::kCleanFrames;
      const double mult = cat.variant == Variant::kCleanPixels ? o.clean_multiple
                                                                : o.defective_multiple;
      // Smallest range over the frame threshold, or largest under it.
      int64_t count;
      if (frames_defective) {
        count = std::max<int64_t>(1, std::llround(o.defective_multiple * r * n));
        while (count < n && static_cast<double>(count) / n <= r) ++count;
        if (*cat.kind == DefectKind::kTextOverlay) count = (count + interval - 1) / interval * interval;
      } else {
        count = std::max<int64_t>(1, std::llround(o.clean_multiple * r * n));
        while (count > 1 && static_cast<double>(count) / n > r) --count;
      }
      count = std::min(count, n);
      DefectSpec d;
      d.kind = *cat.kind;
      d.severity = SeverityAtMultiple(d.kind, mult, p);
      if (at_end) {
        d.start = n - count;
        if (d.kind == DefectKind::kTextOverlay && frames_defective) d.start = d.start / interval * interval;
        d.end = n;
      } else {
        d.start = 0;
        d.end = count;
      }
      s.defects.push_back(d);
    } else if (cat.kind == DefectKind::kHardCut || cat.kind == DefectKind::kDissolve) {
      s.frames = 2 * n;
      DefectSpec d;
      d.kind = *cat.kind;
      const int64_t jitter = static_cast<int64_t>(rng.Below(static_cast<uint64_t>(n / 6 + 1))) - n / 12;
      d.start = n + jitter;
      d.end = d.kind == DefectKind::kHardCut ? d.start + 1 : d.start + std::min<int64_t>(30, n / 3);
      s.defects.push_back(d);
    } else if (cat.kind == DefectKind::kStaticMotion) {
      s.defects.push_back({DefectKind::kStaticMotion, 0, 0, n, {}});
    } else if (cat.kind == DefectKind::kFastJitter) {
      s.defects.push_back({DefectKind::kFastJitter,
                           SeverityAtMultiple(DefectKind::kFastJitter, o.defective_multiple, p),
                           0, n, {}});
    }
    specs.push_back(std::move(s));
  }
  return specs;
}

std::vector<GroundTruth> WriteCorpus(const std::filesystem::path& dir,
                                     const std::vector<ClipSpec>& specs, uint64_t seed,
                                     const TruthParams& params) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<GroundTruth> truths;
  for (const auto& spec : specs) {
    const auto path = dir / (spec.id + ".y4m");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
    truths.push_back(Generate(spec, seed, out, params));
  }
  const auto truth_path = dir / "truth.jsonl";
  std::ofstream out(truth_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + truth_path.string());
  for (const auto& t : truths) out << TruthToJson(t).dump() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + truth_path.string());
  return truths;
}

// ------------------------------------------------------------ truth json

json TruthToJson(const GroundTruth& t) {
  json defects = json::array();
  for (const auto& d : t.spec.defects) {
    json boxes = json::array();
    for (const auto& b : d.geometry) boxes.push_back({b.x0, b.y0, b.x1, b.y1});
    defects.push_back({{"kind", DefectKindName(d.kind)},
                       {"severity", d.severity},
                       {"start", d.start},
                       {"end", d.end},
                       {"geometry", std::move(boxes)}});
  }
  json filt = json::object();
  for (filters::Filter f : filters::kAllFilters) {
    json runs = json::array();
    for (auto [s, n] : filters::EncodeRuns(t[f].flags)) runs.push_back({s, n});
    filt[std::string(filters::FilterName(f))] = {{"pass", t[f].pass},
                                                 {"runs", std::move(runs)}};
  }
  const ClipSpec& s = t.spec;
  return {{"id", t.id},
          {"seed", t.seed},
          {"spec",
           {{"width", s.width},
            {"height", s.height},
            {"frames", s.frames},
            {"fps_num", s.fps_num},
            {"fps_den", s.fps_den},
            {"velocity_x", s.velocity_x},
            {"velocity_y", s.velocity_y},
            {"palette", s.palette},
            {"defects", std::move(defects)}}},
          {"filters", std::move(filt)},
          {"cuts", t.cuts},
          {"dissolve", t.dissolve},
          {"motion", {{"displacement", t.motion_displacement}, {"pass", t.motion_pass}}},
          {"gray_tints", t.gray_tints}};
}

GroundTruth TruthFromJson(const json& j) {
  try {
    GroundTruth t;
    t.id = j.at("id").get<std::string>();
    t.seed = j.at("seed").get<uint64_t>();
    const json& s = j.at("spec");
    t.spec.id = t.id;
    t.spec.width = s.at("width").get<int>();
    t.spec.height = s.at("height").get<int>();
    t.spec.frames = s.at("frames").get<int64_t>();
    t.spec.fps_num = s.at("fps_num").get<int>();
    t.spec.fps_den = s.at("fps_den").get<int>();
    t.spec.velocity_x = s.at("velocity_x").get<int>();
    t.spec.velocity_y = s.at("velocity_y").get<int>();
    t.spec.palette = s.at("palette").get<int>();
    for (const json& d : s.at("defects")) {
      DefectSpec ds;
      ds.kind = ParseDefectKind(d.at("kind").get<std::string>());
      ds.severity = d.at("severity").get<double>();
      ds.start = d.at("start").get<int64_t>();
      ds.end = d.at("end").get<int64_t>();
      for (const json& b : d.at("geometry")) {
        ds.geometry.push_back({b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                               b.at(3).get<int>()});
      }
      t.spec.defects.push_back(std::move(ds));
    }
    for (filters::Filter f : filters::kAllFilters) {
      const json& o = j.at("filters").at(std::string(filters::FilterName(f)));
      std::vector<std::pair<int64_t, int64_t>> runs;
      for (const json& r : o.at("runs")) runs.emplace_back(r.at(0).get<int64_t>(), r.at(1).get<int64_t>());
      auto& e = t.filters[static_cast<size_t>(f)];
      e.flags = filters::DecodeRuns(runs, t.spec.frames);
      e.pass = o.at("pass").get<bool>();
    }
    t.cuts = j.at("cuts").get<std::vector<int64_t>>();
    t.dissolve = j.at("dissolve").get<bool>();
    t.motion_displacement = j.at("motion").at("displacement").get<double>();
    t.motion_pass = j.at("motion").at("pass").get<bool>();
    t.gray_tints = j.at("gray_tints").get<std::vector<int>>();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("truth record: ") + e.what());
  }
}

std::vector<GroundTruth> ReadTruthFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<GroundTruth> out;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kSchemaViolation,
                  path.string() + ":" + std::to_string(line_no) + " is not JSON");
    }
    out.push_back(TruthFromJson(j));
  }
  return out;
}

// ------------------------------------------------------------- evaluation

double PrecisionRecall::precision() const {
  return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double PrecisionRecall::recall() const {
  return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

PrecisionRecall MatchCuts(const std::vector<int64_t>& predicted,
                          const std::vector<int64_t>& expected) {
  PrecisionRecall pr;
  std::vector<bool> used(predicted.size(), false);
  for (int64_t want : expected) {
    std::optional<size_t> best;
    for (size_t i = 0; i < predicted.size(); ++i) {
      if (used[i] || std::llabs(predicted[i] - want) > kCutTolerance) continue;
      if (!best || std::llabs(predicted[i] - want) < std::llabs(predicted[*best] - want)) {
        best = i;
      }
    }
    if (best) {
      used[*best] = true;
      ++pr.tp;
    } else {
      ++pr.fn;
    }
  }
  pr.fp = std::count(used.begin(), used.end(), false);
  return pr;
}

std::map<std::string, PrecisionRecall> Evaluate(
    const std::map<std::string, Verdicts>& predicted,
    const std::map<std::string, GroundTruth>& truth) {
  for (const auto& [id, v] : predicted) {
    if (!truth.count(id)) throw Error(ErrorCode::kIdMismatch, "no ground truth for " + id);
  }
  for (const auto& [id, t] : truth) {
    if (!predicted.count(id)) throw Error(ErrorCode::kIdMismatch, "no verdict for " + id);
  }
  std::map<std::string, PrecisionRecall> out;
  auto tally = [&](const std::string& key, bool said_defect, bool is_defect) {
    PrecisionRecall& pr = out[key];
    if (said_defect && is_defect) ++pr.tp;
    if (said_defect && !is_defect) ++pr.fp;
    if (!said_defect && is_defect) ++pr.fn;
  };
  for (const auto& [id, v] : predicted) {
    const GroundTruth& t = truth.at(id);
    for (filters::Filter f : filters::kAllFilters) {
      const auto& pass = v.filter_pass[static_cast<size_t>(f)];
      if (pass) tally(std::string(filters::FilterName(f)), !*pass, !t[f].pass);
    }
    if (v.motion_pass) tally("motion", !*v.motion_pass, !t.motion_pass);
    if (v.dissolve) tally("dissolve", *v.dissolve, t.dissolve);
    if (v.cuts) {
      const PrecisionRecall m = MatchCuts(*v.cuts, t.cuts);
      PrecisionRecall& pr = out["cuts"];
      pr.tp += m.tp;
      pr.fp += m.fp;
      pr.fn += m.fn;
    }
  }
  return out;
}

}  // namespace uvcurate::synth
