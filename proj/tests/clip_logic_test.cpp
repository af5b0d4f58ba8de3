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

#include <gtest/gtest.h>

#include <random>

#include "uvcurate/error.hpp"

namespace uvcurate::clips {
namespace {

ClipRecord LongClip(int64_t frames, int num = 30, int den = 1) {
  ClipRecord c;
  c.id = "src#000";
  c.source_id = "src";
  c.start_frame = 0;
  c.end_frame = frames;
  c.fps_num = num;
  c.fps_den = den;
  c.width = 3840;
  c.height = 2160;
  return WithSet(c);
}

TEST(Classify, Boundaries) {
  EXPECT_EQ(Classify(5.3), ClipSet::kShort);
  EXPECT_EQ(Classify(10.0), ClipSet::kShort);
  EXPECT_EQ(Classify(3.0), ClipSet::kShort);
  EXPECT_EQ(Classify(2.9), ClipSet::kDiscard);
  EXPECT_EQ(Classify(10.1), ClipSet::kLong);
  try {
    Classify(0.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveDuration);
  }
}

TEST(Classify, FramesAgreeWithSeconds) {
  EXPECT_EQ(ClassifyFrames(300, 30, 1), ClipSet::kShort);
  EXPECT_EQ(ClassifyFrames(301, 30, 1), ClipSet::kLong);
  EXPECT_EQ(ClassifyFrames(90, 30, 1), ClipSet::kShort);
  EXPECT_EQ(ClassifyFrames(89, 30, 1), ClipSet::kDiscard);
  for (int64_t f = 1; f < 2000; ++f) {
    EXPECT_EQ(ClassifyFrames(f, 25, 1), Classify(f / 25.0)) << f;
  }
}

TEST(Extract, FortyFiveSeconds) {
  const auto out = ExtractShortsFromLong(LongClip(45 * 30));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].start_frame, 525);
  EXPECT_EQ(out[0].end_frame, 825);
  EXPECT_EQ(out[0].id, "src#000.w0");
}

TEST(Extract, NinetySecondsGivesThreeWindows) {
  const auto out = ExtractShortsFromLong(LongClip(90 * 30));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].start_frame, 0);
  EXPECT_EQ(out[0].end_frame, 300);
  EXPECT_EQ(out[1].start_frame, 1200);
  EXPECT_EQ(out[1].end_frame, 1500);
  EXPECT_EQ(out[2].start_frame, 2400);
  EXPECT_EQ(out[2].end_frame, 2700);
}

TEST(Extract, SixtyIsOneWindowSixtyOneIsThreeDisjoint) {
  EXPECT_EQ(ExtractShortsFromLong(LongClip(60 * 30)).size(), 1u);
  const auto out = ExtractShortsFromLong(LongClip(61 * 30));
  ASSERT_EQ(out.size(), 3u);
  for (size_t i = 1; i < out.size(); ++i) {
    EXPECT_LE(out[i - 1].end_frame, out[i].start_frame);
  }
}

TEST(Extract, RejectsShortClips) {
  try {
    ExtractShortsFromLong(LongClip(200));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotLongClip);
  }
}

TEST(Extract, QuarterCenterAnchor) {
  const auto out = ExtractShortsFromLong(LongClip(120 * 30),
                                         SideAnchor::kQuarterCenters);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].start_frame, 750);   // centred on 30 s
  EXPECT_EQ(out[1].start_frame, 1650);  // centred on 60 s
  EXPECT_EQ(out[2].start_frame, 2550);  // centred on 90 s
}

TEST(Extract, WindowsStayInBoundsAndClassifyShort) {
  std::mt19937_64 rng(1);
  const std::pair<int, int> rates[] = {{30, 1},    {25, 1},   {60, 1},
                                       {24000, 1001}, {30000, 1001}, {50, 1}};
  for (int trial = 0; trial < 2000; ++trial) {
    const auto [num, den] = rates[trial % 6];
    const int64_t min_frames = int64_t{10} * num / den + 1;
    const int64_t frames = min_frames + rng() % (200 * num / den);
    ClipRecord c = LongClip(frames, num, den);
    c.start_frame = rng() % 1000;
    c.end_frame = c.start_frame + frames;
    for (auto anchor : {SideAnchor::kEdges, SideAnchor::kQuarterCenters}) {
      const auto out = ExtractShortsFromLong(c, anchor);
      for (size_t i = 0; i < out.size(); ++i) {
        EXPECT_GE(out[i].start_frame, c.start_frame);
        EXPECT_LE(out[i].end_frame, c.end_frame);
        EXPECT_EQ(out[i].frames(), WindowFrames(num, den));
        EXPECT_EQ(ClassifyFrames(out[i].frames(), num, den), ClipSet::kShort);
        if (i) EXPECT_LE(out[i - 1].end_frame, out[i].start_frame);
      }
    }
  }
}

TEST(Subclip, Examples) {
  EXPECT_EQ(SubclipSample(100, 81), (FrameRange{9, 90}));
  EXPECT_EQ(SubclipSample(81, 81), (FrameRange{0, 81}));
  EXPECT_EQ(SubclipSample(50, 81), (FrameRange{0, 50}));
}

TEST(Subclip, CentredContiguousProperty) {
  for (int64_t n = 1; n < 400; ++n) {
    for (int64_t t = 1; t < 200; t += 7) {
      const FrameRange r = SubclipSample(n, t);
      EXPECT_EQ(r.end - r.start, std::min(n, t));
      EXPECT_LE(std::abs(r.start - (n - r.end)), 1);
      EXPECT_LE(r.start, n - r.end);  // remainder goes left
    }
  }
}

}  // namespace
}  // namespace uvcurate::clips
