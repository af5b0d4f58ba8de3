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

#include <gtest/gtest.h>

#include <sstream>

#include "uvcurate/error.hpp"
#include "uvcurate/frame_io.hpp"

namespace uvcurate::synth {
namespace {

using filters::Filter;

std::vector<io::Frame> Decode(const std::vector<uint8_t>& bytes) {
  auto in = std::make_unique<std::istringstream>(
      std::string(bytes.begin(), bytes.end()), std::ios::binary);
  io::Y4mReader reader(std::move(in));
  std::vector<io::Frame> frames;
  while (auto f = reader.NextFrame()) frames.push_back(std::move(*f));
  return frames;
}

// What a perfect text detector reports on the sampled frames.
std::vector<std::vector<filters::TextBox>> SampledBoxes(const GroundTruth& t, int interval) {
  std::vector<std::vector<filters::TextBox>> out;
  for (int64_t i : filters::TextSampleIndices(t.spec.frames, interval)) {
    std::vector<filters::TextBox> boxes;
    for (const auto& d : t.spec.defects) {
      if (d.kind == DefectKind::kTextOverlay && i >= d.start && i < d.end) {
        boxes.insert(boxes.end(), d.geometry.begin(), d.geometry.end());
      }
    }
    out.push_back(std::move(boxes));
  }
  return out;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

ClipSpec Plain(int64_t frames = 100) {
  ClipSpec s;
  s.id = "clip";
  s.frames = frames;
  return s;
}

TEST(Generate, FullOverexposureOnTenFrames) {
  ClipSpec s = Plain(100);
  s.defects.push_back({DefectKind::kOverexposure, 1.0, 0, 10, {}});
  const GeneratedClip clip = Generate(s, 1);
  const auto& exposure = clip.truth[Filter::kExposure];
  EXPECT_EQ(std::count(exposure.flags.begin(), exposure.flags.end(), true), 10);
  EXPECT_TRUE(exposure.flags[9]);
  EXPECT_FALSE(exposure.flags[10]);
  EXPECT_FALSE(exposure.pass);

  const auto frames = Decode(clip.y4m);
  ASSERT_EQ(frames.size(), 100u);
  EXPECT_EQ(frames[0].at(0, 0), (io::Rgb{255, 255, 255}));
  EXPECT_EQ(filters::ExposureBadRatio(frames[0]), 1.0);
  EXPECT_EQ(filters::ExposureBadRatio(frames[10]), 0.0);
}

TEST(Generate, HardCutTruth) {
  ClipSpec s = Plain(100);
  s.defects.push_back({DefectKind::kHardCut, 0, 30, 31, {}});
  const GeneratedClip clip = Generate(s, 3);
  EXPECT_EQ(clip.truth.cuts, (std::vector<int64_t>{30}));
  const auto frames = Decode(clip.y4m);
  const auto cuts = split::DetectCuts(split::ContentScores(frames), {});
  EXPECT_EQ(cuts.cuts, (std::vector<int64_t>{30}));
}

TEST(Generate, SameSpecAndSeedSameBytes) {
  ClipSpec s = Plain(40);
  s.defects.push_back({DefectKind::kTextOverlay, 0.03, 5, 15, {}});
  s.defects.push_back({DefectKind::kFastJitter, 20, 20, 40, {}});
  const GeneratedClip a = Generate(s, 42);
  const GeneratedClip b = Generate(s, 42);
  const GeneratedClip c = Generate(s, 43);
  EXPECT_EQ(a.y4m, b.y4m);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_NE(a.y4m, c.y4m);
}

TEST(Generate, ContradictorySpecs) {
  auto with = [](std::vector<DefectSpec> defects) {
    ClipSpec s = Plain(50);
    s.defects = std::move(defects);
    return s;
  };
  const std::vector<ClipSpec> bad = {
      with({{DefectKind::kBlackBorder, 0.05, 0, 10, {}},
            {DefectKind::kOverexposure, 0.2, 5, 15, {}}}),
      with({{DefectKind::kStaticMotion, 0, 0, 20, {}},
            {DefectKind::kFastJitter, 5, 10, 30, {}}}),
      with({{DefectKind::kHardCut, 0, 20, 21, {}}, {DefectKind::kDissolve, 0, 10, 30, {}}}),
      with({{DefectKind::kOverexposure, 0.2, 40, 60, {}}}),
      with({{DefectKind::kOverexposure, 1.5, 0, 10, {}}}),
      with({{DefectKind::kHardCut, 0, 0, 1, {}}}),
      with({{DefectKind::kStaticMotion, 0.5, 0, 10, {}}}),
      with({{DefectKind::kTextOverlay, 0.03, 0, 10, {{0, 0, 500, 10}}}}),
      with({{DefectKind::kBlackBorder, 0.05, 0, 10, {{0, 0, 5, 5}}}}),
  };
  for (const auto& s : bad) {
    EXPECT_EQ(CodeOf([&] { Generate(s, 1); }), ErrorCode::kContradictorySpec)
        << TruthToJson(GroundTruth{.spec = s}).dump();
  }
  // Disjoint families may overlap.
  EXPECT_NO_THROW(Generate(with({{DefectKind::kBlackBorder, 0.05, 0, 10, {}},
                                 {DefectKind::kStaticMotion, 0, 0, 50, {}}}),
                           1));
}

TEST(Generate, GrayTintLandsOnRequestedSide) {
  TruthParams p;
  for (double target : {0.0, 0.8, 2.4, 30.0}) {
    ClipSpec s = Plain(20);
    s.defects.push_back({DefectKind::kGrayFrames, target, 0, 20, {}});
    const GeneratedClip clip = Generate(s, 9, p);
    const auto frames = Decode(clip.y4m);
    for (const auto& f : frames) {
      EXPECT_EQ(filters::GrayingScore(f) < p.stat.gray_variance_min,
                target < p.stat.gray_variance_min)
          << target;
    }
    EXPECT_EQ(clip.truth[Filter::kGraying].pass, target >= p.stat.gray_variance_min);
  }
}

TEST(Generate, BlackBorderAlsoDarkensExposure) {
  // A deep matte is both a border and an underexposure defect.
  ClipSpec s = Plain(20);
  s.defects.push_back({DefectKind::kBlackBorder, 0.045, 0, 20, {}});
  const GeneratedClip clip = Generate(s, 2);
  EXPECT_FALSE(clip.truth[Filter::kBorder].pass);
  EXPECT_FALSE(clip.truth[Filter::kExposure].pass);
  EXPECT_TRUE(clip.truth[Filter::kGraying].pass);
}

TEST(Generate, MotionTruthFollowsVelocity) {
  ClipSpec s = Plain(33);
  s.velocity_x = 1;
  s.velocity_y = 0;
  EXPECT_DOUBLE_EQ(Generate(s, 1).truth.motion_displacement, 8.0);
  s.defects.push_back({DefectKind::kStaticMotion, 0, 0, 33, {}});
  const GeneratedClip frozen = Generate(s, 1);
  EXPECT_EQ(frozen.truth.motion_displacement, 0.0);
  EXPECT_FALSE(frozen.truth.motion_pass);
  const auto frames = Decode(frozen.y4m);
  EXPECT_EQ(frames.front().rgb, frames.back().rgb);
}

TEST(Generate, SeverityMultiples) {
  TruthParams p;
  EXPECT_DOUBLE_EQ(SeverityAtMultiple(DefectKind::kTextOverlay, 1.5, p), 0.03);
  EXPECT_DOUBLE_EQ(SeverityAtMultiple(DefectKind::kOverexposure, 0.5, p), 0.06);
  EXPECT_DOUBLE_EQ(SeverityAtMultiple(DefectKind::kGrayFrames, 1.5, p), 0.8);
  EXPECT_DOUBLE_EQ(SeverityAtMultiple(DefectKind::kBlackBorder, 1.5, p), 0.045);
}

TEST(ClosedLoop, FiltersMatchTruthFrameByFrame) {
  TruthParams p;
  CorpusOptions o;
  o.clips = 42;
  const auto specs = PlanCorpus(o, 2024, p);
  int failing = 0;
  for (const auto& spec : specs) {
    const GeneratedClip clip = Generate(spec, 2024, p);
    const auto frames = Decode(clip.y4m);
    ASSERT_EQ(static_cast<int64_t>(frames.size()), clip.truth.spec.frames);
    const auto boxes = SampledBoxes(clip.truth, p.stat.text_sample_interval);
    const filters::FilterReport report = filters::RunFilters(frames, boxes, p.stat);
    for (Filter f : filters::kAllFilters) {
      EXPECT_EQ(report[f].flags, clip.truth[f].flags)
          << spec.id << " " << filters::FilterName(f);
      EXPECT_EQ(report[f].verdict.pass, clip.truth[f].pass)
          << spec.id << " " << filters::FilterName(f);
    }
    failing += !clip.truth.stat_pass();
  }
  EXPECT_GT(failing, 8);
  EXPECT_LT(failing, 30);
}

TEST(ClosedLoop, HoldsUnderAlternativeThresholds) {
  TruthParams p;
  p.stat.text_area_ratio = 0.05;
  p.stat.exposure_pixel_ratio = 0.2;
  p.stat.gray_variance_min = 3.0;
  p.stat.border_per_side = true;
  p.stat.variance_bessel = true;
  CorpusOptions o;
  o.clips = 17;
  o.transitions = false;
  for (const auto& spec : PlanCorpus(o, 7, p)) {
    const GeneratedClip clip = Generate(spec, 7, p);
    const auto frames = Decode(clip.y4m);
    const auto report =
        filters::RunFilters(frames, SampledBoxes(clip.truth, p.stat.text_sample_interval), p.stat);
    for (Filter f : filters::kAllFilters) {
      EXPECT_EQ(report[f].flags, clip.truth[f].flags) << spec.id << " " << filters::FilterName(f);
    }
  }
}

TEST(Truth, JsonRoundTrip) {
  CorpusOptions o;
  o.clips = 21;
  o.frames = 30;
  for (const auto& spec : PlanCorpus(o, 5)) {
    std::ostringstream sink;
    const GroundTruth t = Generate(spec, 5, sink);
    EXPECT_EQ(TruthFromJson(nlohmann::json::parse(TruthToJson(t).dump())), t);
  }
}

TEST(Evaluate, PerfectVerdicts) {
  std::map<std::string, GroundTruth> truth;
  std::map<std::string, Verdicts> pred;
  CorpusOptions o;
  o.clips = 21;
  o.frames = 30;
  for (const auto& spec : PlanCorpus(o, 8)) {
    std::ostringstream sink;
    GroundTruth t = Generate(spec, 8, sink);
    Verdicts v;
    for (Filter f : filters::kAllFilters) v.filter_pass[static_cast<size_t>(f)] = t[f].pass;
    v.cuts = t.cuts;
    v.motion_pass = t.motion_pass;
    pred[t.id] = v;
    truth[t.id] = std::move(t);
  }
  for (const auto& [key, pr] : Evaluate(pred, truth)) {
    EXPECT_EQ(pr.precision(), 1.0) << key;
    EXPECT_EQ(pr.recall(), 1.0) << key;
  }
}

TEST(Evaluate, OneFalseAlarmAmongTen) {
  std::map<std::string, GroundTruth> truth;
  std::map<std::string, Verdicts> pred;
  for (int i = 0; i < 20; ++i) {
    GroundTruth t;
    t.id = std::to_string(i);
    t.filters[0].pass = i >= 10;  // ten clips with text
    Verdicts v;
    v.filter_pass[0] = i >= 11;   // one clean clip flagged too
    truth[t.id] = t;
    pred[t.id] = v;
  }
  const auto r = Evaluate(pred, truth);
  EXPECT_DOUBLE_EQ(r.at("text").precision(), 10.0 / 11.0);
  EXPECT_EQ(r.at("text").recall(), 1.0);
  EXPECT_FALSE(r.count("border"));
}

TEST(Evaluate, CutToleranceAndIdMismatch) {
  EXPECT_EQ(MatchCuts({31}, {30}), (PrecisionRecall{1, 0, 0}));
  EXPECT_EQ(MatchCuts({32}, {30}), (PrecisionRecall{0, 1, 1}));
  EXPECT_EQ(MatchCuts({29, 30}, {30}), (PrecisionRecall{1, 1, 0}));
  EXPECT_EQ(MatchCuts({}, {}), (PrecisionRecall{}));

  std::map<std::string, GroundTruth> truth{{"a", GroundTruth{}}};
  std::map<std::string, Verdicts> pred{{"b", Verdicts{}}};
  EXPECT_EQ(CodeOf([&] { Evaluate(pred, truth); }), ErrorCode::kIdMismatch);
  EXPECT_EQ(CodeOf([&] { Evaluate({}, truth); }), ErrorCode::kIdMismatch);
}

}  // namespace
}  // namespace uvcurate::synth
