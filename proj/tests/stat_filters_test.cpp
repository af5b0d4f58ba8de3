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

#include "uvcurate/stat_filters.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "test_util.hpp"
#include "uvcurate/error.hpp"

namespace uvcurate::filters {
namespace {

using io::Frame;
using io::Rgb;

Frame Mirror(const Frame& f, bool horizontal) {
  Frame out = f;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const int sx = horizontal ? f.width - 1 - x : x;
      const int sy = horizontal ? y : f.height - 1 - y;
      const Rgb c = f.at(sx, sy);
      uint8_t* p = &out.rgb[(static_cast<size_t>(y) * f.width + x) * 3];
      p[0] = c.r, p[1] = c.g, p[2] = c.b;
    }
  }
  return out;
}

TEST(TextUnionRatio, EmptyIsZero) {
  EXPECT_EQ(TextUnionRatio(1920, 1080, {}), 0.0);
}

TEST(TextUnionRatio, SingleBoxBelowThreshold) {
  const std::vector<TextBox> boxes = {{100, 100, 200, 150}};
  const double r = TextUnionRatio(1920, 1080, boxes);
  EXPECT_DOUBLE_EQ(r, 5000.0 / 2073600.0);
  EXPECT_NEAR(r, 0.002411, 1e-6);
  EXPECT_FALSE(r > StatThresholds{}.text_area_ratio);
}

TEST(TextUnionRatio, InvalidBoxes) {
  for (TextBox b : {TextBox{-1, 0, 5, 5}, TextBox{0, 0, 0, 5},
                    TextBox{0, 0, 11, 5}, TextBox{3, 4, 2, 8}}) {
    std::vector<TextBox> boxes = {b};
    try {
      TextUnionRatio(10, 10, boxes);
      ADD_FAILURE() << "accepted invalid box";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidBox);
    }
  }
}

TEST(TextUnionRatio, MatchesRasterizationOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const int w = std::uniform_int_distribution<int>(1, 96)(rng);
    const int h = std::uniform_int_distribution<int>(1, 96)(rng);
    const auto boxes = testing::RandomBoxes(rng, w, h);
    ASSERT_EQ(TextUnionRatio(w, h, boxes), oracle::RasterUnionRatio(w, h, boxes))
        << "trial " << trial;
  }
}

TEST(TextUnionRatio, MonotoneAndIdempotent) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto boxes = testing::RandomBoxes(rng, 64, 48);
    const double before = TextUnionRatio(64, 48, boxes);
    auto doubled = boxes;
    doubled.insert(doubled.end(), boxes.begin(), boxes.end());
    EXPECT_EQ(TextUnionRatio(64, 48, doubled), before);
    boxes.push_back(testing::RandomBox(rng, 64, 48));
    EXPECT_GE(TextUnionRatio(64, 48, boxes), before);
  }
}

TEST(BorderMean, BlackAndGrayFrames) {
  const StatThresholds t;
  const Frame black = Frame::Filled(64, 48, {0, 0, 0});
  EXPECT_EQ(BorderMean(black, t.border_depth_ratio), 0.0);
  EXPECT_TRUE(FlagFrame(MeasureFrame(black, t), t).border);
  const Frame gray = Frame::Filled(64, 48, {128, 128, 128});
  EXPECT_EQ(BorderMean(gray, t.border_depth_ratio), 128.0);
  EXPECT_FALSE(FlagFrame(MeasureFrame(gray, t), t).border);
}

TEST(BorderMean, LetterboxMatchesOracle) {
  // 200x100: dx = 6, dy = 3. Bars of the same depth are black, the rest
  // mid-gray, so the union mean is exactly zero; a thinner bar is not.
  Frame f = Frame::Filled(200, 100, {128, 128, 128});
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 200; ++x) {
      if (x < 6 || x >= 194 || y < 3 || y >= 97) {
        uint8_t* p = &f.rgb[(static_cast<size_t>(y) * 200 + x) * 3];
        p[0] = p[1] = p[2] = 0;
      }
    }
  }
  EXPECT_EQ(BorderMean(f, 0.03), 0.0);
  EXPECT_EQ(BorderMean(f, 0.05), oracle::BorderMean(f, 0.05));
  EXPECT_GT(BorderMean(f, 0.05), 3.0);
}

TEST(BorderMean, FrameTooSmall) {
  try {
    BorderMean(Frame::Filled(2, 2, {1, 1, 1}), 0.03);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFrameTooSmall);
  }
}

TEST(BorderMean, PerSideCatchesSingleDarkBar) {
  Frame f = Frame::Filled(100, 100, {128, 128, 128});
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 100; ++x) {
      uint8_t* p = &f.rgb[(static_cast<size_t>(y) * 100 + x) * 3];
      p[0] = p[1] = p[2] = 0;
    }
  }
  StatThresholds t;
  EXPECT_FALSE(FlagFrame(MeasureFrame(f, t), t).border);
  t.border_per_side = true;
  EXPECT_TRUE(FlagFrame(MeasureFrame(f, t), t).border);
  EXPECT_EQ(BorderSideMeans(f, 0.03).top, 0.0);
}

TEST(Exposure, Examples) {
  EXPECT_EQ(ExposureBadRatio(Frame::Filled(10, 10, {255, 255, 255})), 1.0);
  EXPECT_EQ(ExposureBadRatio(Frame::Filled(10, 10, {128, 128, 128})), 0.0);

  Frame f = Frame::Filled(10, 10, {128, 128, 128});
  std::fill_n(f.rgb.begin(), 13 * 3, 255);
  const StatThresholds t;
  EXPECT_DOUBLE_EQ(ExposureBadRatio(f), 0.13);
  EXPECT_TRUE(FlagFrame(MeasureFrame(f, t), t).exposure);
}

TEST(Exposure, StrictBoundaries) {
  EXPECT_EQ(ExposureBadRatio(Frame::Filled(4, 4, {250, 250, 250})), 0.0);
  EXPECT_EQ(ExposureBadRatio(Frame::Filled(4, 4, {5, 5, 5})), 0.0);
  EXPECT_EQ(ExposureBadRatio(Frame::Filled(4, 4, {251, 251, 251})), 1.0);
  EXPECT_EQ(ExposureBadRatio(Frame::Filled(4, 4, {4, 4, 4})), 1.0);
  // Exactly 12% is not "higher than 12%".
  Frame f = Frame::Filled(10, 10, {128, 128, 128});
  std::fill_n(f.rgb.begin(), 12 * 3, 0);
  const StatThresholds t;
  EXPECT_FALSE(FlagFrame(MeasureFrame(f, t), t).exposure);
}

TEST(Graying, Examples) {
  const StatThresholds t;
  const Frame gray = Frame::Filled(8, 8, {77, 77, 77});
  EXPECT_EQ(GrayingScore(gray), 0.0);
  EXPECT_TRUE(FlagFrame(MeasureFrame(gray, t), t).graying);

  const Frame colorful = Frame::Filled(8, 8, {0, 128, 255});
  EXPECT_NEAR(GrayingScore(colorful), 10837.56, 0.005);
  EXPECT_NEAR(GrayingScore(colorful), 97538.0 / 9.0, 1e-9);
  EXPECT_FALSE(FlagFrame(MeasureFrame(colorful, t), t).graying);
  EXPECT_NEAR(GrayingScore(colorful, /*bessel=*/true), 97538.0 / 6.0, 1e-9);
}

TEST(Graying, ZeroIffAllChannelsEqual) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Frame f = Frame::Filled(6, 5, {0, 0, 0});
    for (size_t i = 0; i < f.pixel_count(); ++i) {
      const uint8_t v = rng() % 256;
      f.rgb[3 * i] = f.rgb[3 * i + 1] = f.rgb[3 * i + 2] = v;
    }
    const bool perturb = trial % 2;
    if (perturb) f.rgb[3 * (rng() % f.pixel_count()) + rng() % 3] ^= 1;
    EXPECT_EQ(GrayingScore(f) == 0.0, !perturb);
  }
}

TEST(PixelFilters, MatchOraclesOnRandomFrames) {
  std::mt19937_64 rng(99);
  const StatThresholds t;
  for (int trial = 0; trial < 150; ++trial) {
    const int w = std::uniform_int_distribution<int>(16, 160)(rng);
    const int h = std::uniform_int_distribution<int>(16, 160)(rng);
    const Frame f = testing::RandomFrame(rng, w, h);
    const FrameMeasures m = MeasureFrame(f, t);
    EXPECT_LE(oracle::RelativeError(BorderMean(f, 0.03),
                                    oracle::BorderMean(f, 0.03)), 1e-9);
    EXPECT_LE(oracle::RelativeError(m.border_mean, oracle::BorderMean(f, 0.03)),
              1e-9);
    EXPECT_LE(oracle::RelativeError(ExposureBadRatio(f),
                                    oracle::ExposureBadRatio(f, 5, 250)), 1e-9);
    EXPECT_LE(oracle::RelativeError(m.exposure_ratio,
                                    oracle::ExposureBadRatio(f, 5, 250)), 1e-9);
    EXPECT_LE(oracle::RelativeError(GrayingScore(f),
                                    oracle::GrayingScore(f, false)), 1e-9);
    EXPECT_LE(oracle::RelativeError(m.graying, oracle::GrayingScore(f, false)),
              1e-9);
    EXPECT_EQ(m.border_side_min, BorderSideMeans(f, 0.03).min());
  }
}

TEST(PixelFilters, MirrorInvariance) {
  std::mt19937_64 rng(3);
  const StatThresholds t;
  for (int trial = 0; trial < 50; ++trial) {
    const Frame f = testing::RandomFrame(rng, 40 + trial, 30 + trial / 2);
    for (bool horizontal : {true, false}) {
      const Frame g = Mirror(f, horizontal);
      EXPECT_DOUBLE_EQ(BorderMean(g, 0.03), BorderMean(f, 0.03));
      EXPECT_EQ(ExposureBadRatio(g), ExposureBadRatio(f));
      EXPECT_DOUBLE_EQ(GrayingScore(g), GrayingScore(f));
      EXPECT_EQ(FlagFrame(MeasureFrame(g, t), t).border,
                FlagFrame(MeasureFrame(f, t), t).border);
    }
  }
}

TEST(AggregateClip, FivePercentBoundary) {
  const StatThresholds t;
  std::vector<bool> flags(100, false);
  EXPECT_TRUE(AggregateClip(flags, t).pass);
  std::fill_n(flags.begin(), 5, true);
  auto v = AggregateClip(flags, t);
  EXPECT_EQ(v.ratio, 0.05);
  EXPECT_TRUE(v.pass);
  flags[5] = true;
  v = AggregateClip(flags, t);
  EXPECT_EQ(v.ratio, 0.06);
  EXPECT_FALSE(v.pass);
}

TEST(AggregateClip, EmptyClip) {
  try {
    AggregateClip({}, StatThresholds{});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyClip);
  }
}

TEST(AggregateClip, OrderIndependent) {
  std::mt19937_64 rng(17);
  const StatThresholds t;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<bool> flags(std::uniform_int_distribution<int>(1, 200)(rng));
    for (size_t i = 0; i < flags.size(); ++i) flags[i] = rng() % 10 == 0;
    auto shuffled = flags;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(AggregateClip(flags, t), AggregateClip(shuffled, t));
  }
}

TEST(RunFilters, SampledTextFlagsCoverTheirSpan) {
  std::vector<Frame> frames(12, Frame::Filled(100, 100, {200, 120, 60}));
  StatThresholds t;
  t.text_sample_interval = 5;
  ASSERT_EQ(TextSampleIndices(12, 5), (std::vector<int64_t>{0, 5, 10}));
  std::vector<std::vector<TextBox>> boxes(3);
  boxes[1] = {{0, 0, 50, 50}};
  const FilterReport r = RunFilters(frames, boxes, t);
  const std::vector<bool> want = {false, false, false, false, false, true,
                                  true,  true,  true,  true,  false, false};
  EXPECT_EQ(r[Filter::kText].flags, want);
  EXPECT_FALSE(r[Filter::kText].verdict.pass);
  EXPECT_TRUE(r[Filter::kBorder].verdict.pass);
  EXPECT_TRUE(r[Filter::kExposure].verdict.pass);
  EXPECT_TRUE(r[Filter::kGraying].verdict.pass);
  EXPECT_EQ(r.Failed(), std::vector<Filter>{Filter::kText});
}

TEST(RunFilters, DeterministicAcrossThreads) {
  std::mt19937_64 rng(8);
  std::vector<Frame> frames;
  for (int i = 0; i < 20; ++i) frames.push_back(testing::RandomFrame(rng, 48, 32));
  const StatThresholds t;
  std::vector<std::vector<TextBox>> boxes(TextSampleIndices(20, 5).size());
  const FilterReport base = RunFilters(frames, boxes, t);
  std::vector<FilterReport> out(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] { out[i] = RunFilters(frames, boxes, t); });
  }
  for (auto& th : threads) th.join();
  for (const auto& r : out) EXPECT_EQ(r, base);
}

TEST(Runs, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<bool> flags(rng() % 64);
    for (size_t i = 0; i < flags.size(); ++i) flags[i] = rng() % 3 == 0;
    EXPECT_EQ(DecodeRuns(EncodeRuns(flags), flags.size()), flags);
  }
}

}  // namespace
}  // namespace uvcurate::filters
