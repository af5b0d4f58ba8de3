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

// Synthetic test footage with known defects. A clip is a translating value
// noise texture in a saturated colour; defects are painted over it per
// frame range. Ground truth is worked out from the layout (pixel counts per
// painted colour, plus the exact range of values the texture can decode to)
// rather than by running the filters.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "uvcurate/purification.hpp"
#include "uvcurate/scene_split.hpp"
#include "uvcurate/stat_filters.hpp"

namespace uvcurate::synth {

enum class DefectKind {
  kTextOverlay,
  kBlackBorder,
  kOverexposure,
  kUnderexposure,
  kGrayFrames,
  kStaticMotion,
  kFastJitter,
  kHardCut,
  kDissolve,
};
std::string_view DefectKindName(DefectKind k);
DefectKind ParseDefectKind(std::string_view name);

/// Severity units, per kind:
///   TextOverlay    union area of the boxes over frame area, (0, 1]
///   BlackBorder    matte depth over each dimension, (0, 0.25)
///   Over/Under     share of pixels painted white/black, (0, 1]
///   GrayFrames     target graying score; the tint is chosen to land near it, [0, 1000]
///   StaticMotion   must be 0; the texture stops moving over the range
///   FastJitter     jitter amplitude in pixels per axis, [1, 4096]
///   HardCut        ignored; the new shot starts at frame_start
///   Dissolve       ignored; the blend spans the range
struct DefectSpec {
  DefectKind kind = DefectKind::kTextOverlay;
  double severity = 0;
  int64_t start = 0;  // frame range [start, end)
  int64_t end = 0;
  std::vector<filters::TextBox> geometry;  // TextOverlay only; derived when empty
  bool operator==(const DefectSpec&) const = default;
};

struct ClipSpec {
  std::string id;
  int width = 160;
  int height = 96;
  int64_t frames = 120;
  int fps_num = 30;
  int fps_den = 1;
  int velocity_x = 1;  // texture pixels per frame
  int velocity_y = 0;
  int palette = 0;     // starting hue index, 0..5
  std::vector<DefectSpec> defects;
  bool operator==(const ClipSpec&) const = default;
};

/// Thresholds the truth is computed against.
struct TruthParams {
  filters::StatThresholds stat;
  purify::PurifyThresholds purify;
  split::SplitParams split;
};

struct ExpectedFilter {
  std::vector<bool> flags;
  bool pass = true;
  bool operator==(const ExpectedFilter&) const = default;
};

struct GroundTruth {
  std::string id;
  uint64_t seed = 0;
  ClipSpec spec;                         // geometry filled in
  std::array<ExpectedFilter, 4> filters;  // indexed by filters::Filter
  std::vector<int64_t> cuts;
  bool dissolve = false;
  double motion_displacement = 0;  // true mean displacement over the motion pairs
  bool motion_pass = true;
  std::vector<int> gray_tints;  // V offset picked for each GrayFrames defect

  const ExpectedFilter& operator[](filters::Filter f) const {
    return filters[static_cast<size_t>(f)];
  }
  bool stat_pass() const;
  bool operator==(const GroundTruth&) const = default;
};

struct GeneratedClip {
  std::vector<uint8_t> y4m;
  GroundTruth truth;
};

/// Throws ContradictorySpec when the defects overlap in a way the truth
/// cannot describe, a range leaves the clip, a severity is out of bounds, or
/// a filter outcome would depend on texture content.
GeneratedClip Generate(const ClipSpec& spec, uint64_t seed,
                       const TruthParams& params = {});

/// Same, streaming the Y4M bytes to `out`.
GroundTruth Generate(const ClipSpec& spec, uint64_t seed, std::ostream& out,
                     const TruthParams& params = {});

/// Severity that puts a pixel-level defect at `multiple` times its
/// threshold, on the failing side (GrayFrames aims below the variance floor,
/// so it divides).
double SeverityAtMultiple(DefectKind kind, double multiple, const TruthParams& params);

struct CorpusOptions {
  int clips = 200;
  int width = 160;
  int height = 96;
  int64_t frames = 120;
  double defective_multiple = 1.5;
  double clean_multiple = 0.5;
  // Include clips with cuts, dissolves, frozen and jittering motion.
  bool transitions = true;
};

/// Deterministic mix of clean and defective clips, ids "000", "001", ...
std::vector<ClipSpec> PlanCorpus(const CorpusOptions& options, uint64_t seed,
                                 const TruthParams& params = {});

/// Writes `<dir>/<id>.y4m` for each spec and `<dir>/truth.jsonl`.
std::vector<GroundTruth> WriteCorpus(const std::filesystem::path& dir,
                                     const std::vector<ClipSpec>& specs,
                                     uint64_t seed, const TruthParams& params = {});

nlohmann::json TruthToJson(const GroundTruth& t);
GroundTruth TruthFromJson(const nlohmann::json& j);
/// Throws IoError or SchemaViolation.
std::vector<GroundTruth> ReadTruthFile(const std::filesystem::path& path);

// ------------------------------------------------------------- evaluation

struct Verdicts {
  std::array<std::optional<bool>, 4> filter_pass;  // by filters::Filter
  std::optional<std::vector<int64_t>> cuts;
  std::optional<bool> motion_pass;
  std::optional<bool> dissolve;
};

/// Counts against the "defect present" class. Precision is 1 when nothing was
/// predicted, recall is 1 when nothing was there to find.
struct PrecisionRecall {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  double precision() const;
  double recall() const;
  bool operator==(const PrecisionRecall&) const = default;
};

inline constexpr int64_t kCutTolerance = 1;

/// Keys: "text", "border", "exposure", "graying", "cuts", "motion",
/// "dissolve"; a key appears only when some verdict carries it. Throws
/// IdMismatch unless both maps hold the same ids.
std::map<std::string, PrecisionRecall> Evaluate(
    const std::map<std::string, Verdicts>& predicted,
    const std::map<std::string, GroundTruth>& truth);

/// Greedy one-to-one matching of cuts within +-kCutTolerance.
PrecisionRecall MatchCuts(const std::vector<int64_t>& predicted,
                          const std::vector<int64_t>& expected);

}  // namespace uvcurate::synth
