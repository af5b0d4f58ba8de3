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


// Acceptance suite. One line per criterion; the exit status is nonzero when
// any gating criterion fails. Criterion 10 is reported only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "uvcurate/caption_engine.hpp"
#include "uvcurate/clip_logic.hpp"
#include "uvcurate/config.hpp"
#include "uvcurate/error.hpp"
#include "uvcurate/frame_io.hpp"
#include "uvcurate/manifest_store.hpp"
#include "uvcurate/pipeline.hpp"
#include "uvcurate/purification.hpp"
#include "uvcurate/rng.hpp"
#include "uvcurate/scene_split.hpp"
#include "uvcurate/stat_filters.hpp"
#include "uvcurate/synth_corpus.hpp"

namespace fs = std::filesystem;
using namespace uvcurate;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure notes; the first few end up in the report line.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome Done(std::string detail) const {
    if (failures_ == 0) return {true, std::move(detail)};
    return {false, std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

std::string Fixed(double v, int digits) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() /
           ("uvcurate-acceptance-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

// ----------------------------------------------------------------------- 1

Outcome ThresholdFidelity() {
  Check c;
  const fs::path golden = fs::path(UVCURATE_SOURCE_DIR) / "tests/golden/config_default.toml";
  std::ifstream in(golden, std::ios::binary);
  c.Expect(static_cast<bool>(in), "cannot open " + golden.string());
  std::stringstream want;
  want << in.rdbuf();
  const config::PipelineConfig def;
  const std::string dump = config::DumpConfig(def);
  c.Expect(dump == want.str(), "dump differs from golden file");

  const auto& f = def.filters;
  const auto& p = def.purify;
  c.Expect(f.text_area_ratio == 0.02, "text_area_ratio");
  c.Expect(f.bad_frame_ratio == 0.05, "bad_frame_ratio");
  c.Expect(f.border_depth_ratio == 0.03, "border_depth_ratio");
  c.Expect(f.border_mean_max == 3.0, "border_mean_max");
  c.Expect(f.exposure_low == 5 && f.exposure_high == 250, "exposure bounds");
  c.Expect(f.exposure_pixel_ratio == 0.12, "exposure_pixel_ratio");
  c.Expect(f.gray_variance_min == 1.2, "gray_variance_min");
  c.Expect(p.vtss_min == 0.01, "vtss_min");
  c.Expect(p.motion_min == 0.1 && p.motion_max == 100.0, "motion range");
  c.Expect(p.caption_sim_min == 0.2, "caption_sim_min");
  c.Expect(config::ParseConfig(dump, "dump") == def, "dump does not parse back");
  return c.Done("dump matches golden (" + std::to_string(dump.size()) + " bytes)");
}

// ----------------------------------------------------------------------- 2

Outcome FilterOracles() {
  Check c;
  std::mt19937_64 rng(20260401);
  std::uniform_int_distribution<int> size(16, 512);
  const filters::StatThresholds t;
  double worst = 0;
  auto compare = [&](double got, double want, const char* name, int i) {
    const double err = oracle::RelativeError(got, want);
    worst = std::max(worst, err);
    c.Expect(err <= 1e-9, std::string(name) + " frame " + std::to_string(i));
  };
  for (int i = 0; i < 1000; ++i) {
    const int w = size(rng), h = size(rng);
    const io::Frame f = testing::RandomFrame(rng, w, h);
    const auto boxes = testing::RandomBoxes(rng, w, h);
    const bool bessel = rng() & 1;
    compare(filters::TextUnionRatio(w, h, boxes), oracle::RasterUnionRatio(w, h, boxes),
            "text", i);
    compare(filters::BorderMean(f, t.border_depth_ratio),
            oracle::BorderMean(f, t.border_depth_ratio), "border", i);
    compare(filters::ExposureBadRatio(f, t.exposure_low, t.exposure_high),
            oracle::ExposureBadRatio(f, t.exposure_low, t.exposure_high), "exposure", i);
    compare(filters::GrayingScore(f, bessel), oracle::GrayingScore(f, bessel), "graying", i);
  }
  std::ostringstream d;
  d << "1000 frames, max relative error " << worst;
  return c.Done(d.str());
}

// ----------------------------------------------------------------------- 3

constexpr uint64_t kCorpusSeed = 2026;

std::vector<std::vector<filters::TextBox>> TruthBoxes(const synth::GroundTruth& t,
                                                      int interval) {
  std::vector<std::vector<filters::TextBox>> out;
  for (int64_t i : filters::TextSampleIndices(t.spec.frames, interval)) {
    std::vector<filters::TextBox> boxes;
    for (const auto& d : t.spec.defects) {
      if (d.kind == synth::DefectKind::kTextOverlay && i >= d.start && i < d.end) {
        boxes.insert(boxes.end(), d.geometry.begin(), d.geometry.end());
      }
    }
    out.push_back(std::move(boxes));
  }
  return out;
}

Outcome ClosedLoop(const fs::path& corpus, const std::vector<synth::GroundTruth>& truth) {
  Check c;
  const synth::TruthParams params;
  std::map<std::string, synth::Verdicts> predicted;
  std::map<std::string, synth::GroundTruth> expected;
  for (const auto& t : truth) {
    auto reader = io::Y4mReader::Open(corpus / (t.id + ".y4m"));
    filters::FilterAccumulator acc(params.stat);
    while (auto f = reader->NextFrame()) acc.Push(*f);
    const auto report = acc.Finish(TruthBoxes(t, params.stat.text_sample_interval));
    synth::Verdicts v;
    for (filters::Filter f : filters::kAllFilters) {
      v.filter_pass[static_cast<size_t>(f)] = report[f].verdict.pass;
    }
    predicted[t.id] = v;
    expected[t.id] = t;
  }
  const auto pr = synth::Evaluate(predicted, expected);
  std::ostringstream d;
  d << truth.size() << " clips;";
  for (filters::Filter f : filters::kAllFilters) {
    const std::string name(filters::FilterName(f));
    const auto it = pr.find(name);
    c.Expect(it != pr.end(), name + " not evaluated");
    if (it == pr.end()) continue;
    const auto& m = it->second;
    c.Expect(m.precision() == 1.0 && m.recall() == 1.0,
             name + " P=" + Fixed(m.precision(), 3) + " R=" + Fixed(m.recall(), 3));
    d << " " << name << " P=" << Fixed(m.precision(), 2) << " R=" << Fixed(m.recall(), 2)
      << " (" << m.tp << " defective)";
  }
  return c.Done(d.str());
}

// ----------------------------------------------------------------------- 4

Outcome SceneDetection() {
  Check c;
  const split::SplitParams params;
  std::mt19937_64 rng(44);
  int64_t cuts = 0, found = 0;
  for (int i = 0; i < 50; ++i) {
    synth::ClipSpec s;
    s.id = "cut" + std::to_string(i);
    s.frames = 180;
    s.velocity_x = static_cast<int>(rng() % 3);  // static or slow pan
    s.velocity_y = static_cast<int>(rng() % 2);
    s.palette = static_cast<int>(rng() % 6);
    const int n = 1 + static_cast<int>(rng() % 4);
    int64_t at = 0;
    for (int k = 0; k < n; ++k) {
      at += params.min_scene_len + 5 + static_cast<int64_t>(rng() % 20);
      if (at + params.min_scene_len + 5 >= s.frames) break;
      s.defects.push_back({synth::DefectKind::kHardCut, 0, at, at + 1, {}});
    }
    const synth::GeneratedClip g = synth::Generate(s, 4000 + i);
    io::Y4mReader reader(std::make_unique<std::istringstream>(
        std::string(g.y4m.begin(), g.y4m.end()), std::ios::binary));
    split::ScoreAccumulator acc;
    while (auto f = reader.NextFrame()) acc.Push(*f);
    const split::CutList got = split::DetectCuts(acc.scores(), params);
    const synth::PrecisionRecall m = synth::MatchCuts(got.cuts, g.truth.cuts);
    cuts += static_cast<int64_t>(g.truth.cuts.size());
    found += m.tp;
    c.Expect(m.fn == 0, s.id + " missed " + std::to_string(m.fn));
    c.Expect(m.fp == 0, s.id + " " + std::to_string(m.fp) + " false cut(s)");
  }
  return c.Done("50 clips, " + std::to_string(found) + "/" + std::to_string(cuts) +
                " cuts within +-1, 0 false");
}

// ----------------------------------------------------------------------- 5

std::vector<io::Frame> Translating(int w, int h, int d, int frames, int interval, int scale) {
  std::vector<io::Frame> out;
  for (int t = 0; t < frames; ++t) {
    const int64_t off = static_cast<int64_t>(t / interval) * d * scale;
    io::Frame f = testing::NoiseFrame(w, h, 0, 0, 9, t);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const uint8_t v = testing::NoiseAt((x + off) / scale, y / scale, 9);
        uint8_t* p = &f.rgb[(static_cast<size_t>(y) * w + x) * 3];
        p[0] = p[1] = p[2] = v;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

Outcome Motion() {
  Check c;
  const purify::PurifyThresholds p;
  std::ostringstream d;
  // Native size and a frame the scorer halves before matching.
  for (auto [w, h, scale] : {std::tuple{256, 144, 1}, std::tuple{1024, 576, 2}}) {
    for (int disp = 0; disp <= 4; ++disp) {
      const auto frames = Translating(w, h, disp, 2 * p.flow_sample_interval + 1,
                                      p.flow_sample_interval, scale);
      double sum = 0;
      int64_t blocks = 0;
      for (auto [a, b] : purify::MotionPairs(frames.size(), p.flow_sample_interval)) {
        const purify::BlockField field =
            purify::MatchBlocks(purify::DownscaledLuma(frames[a], p.flow_downscale),
                                purify::DownscaledLuma(frames[b], p.flow_downscale));
        for (int by = 1; by + 1 < field.blocks_y; ++by) {
          for (int bx = 1; bx + 1 < field.blocks_x; ++bx) {
            const auto v = field.vectors[static_cast<size_t>(by * field.blocks_x + bx)];
            c.Expect(v == purify::MotionVector{disp, 0},
                     std::to_string(w) + "px d=" + std::to_string(disp) + " block (" +
                         std::to_string(bx) + "," + std::to_string(by) + ")");
            sum += std::hypot(v.dx, v.dy);
            ++blocks;
          }
        }
      }
      c.Expect(blocks > 0 && sum / blocks == disp, "interior mean != d");
    }
    std::vector<io::Frame> still(3 * p.flow_sample_interval, testing::NoiseFrame(w, h, 0, 0, 5));
    const double score = purify::MotionScore(still, p);
    c.Expect(score == 0.0, "identical frames scored " + std::to_string(score));
  }
  return c.Done("d=0..4 exact on interior blocks at 256x144 and 1024x576; still clip 0");
}

// ----------------------------------------------------------------------- 6

caption::StructuredCaption SampleCaption() {
  caption::StructuredCaption c;
  for (size_t i = 0; i < caption::kCategoryCount; ++i) {
    c.fields[i] = "text for " + std::string(caption::kCategoryKeys[i]);
  }
  c.summarized = "summary text";
  return c;
}

std::string PromptStream(uint64_t seed, int draws,
                         std::map<caption::PromptBase, int>* bases,
                         std::map<caption::Category, int>* supplements) {
  const caption::StructuredCaption cap = SampleCaption();
  Xoshiro256 rng(seed);
  std::string out;
  for (int i = 0; i < draws; ++i) {
    const caption::PromptSample s = caption::SamplePrompt(cap, rng);
    if (bases) ++(*bases)[s.base];
    if (supplements && s.supplement) ++(*supplements)[*s.supplement];
    out += s.text;
    out += '\n';
  }
  return out;
}

Outcome CaptionSampling() {
  Check c;
  constexpr int kDraws = 30000;
  std::map<caption::PromptBase, int> bases;
  std::map<caption::Category, int> supplements;
  const std::string first = PromptStream(77, kDraws, &bases, &supplements);
  const std::string second = PromptStream(77, kDraws, nullptr, nullptr);
  c.Expect(first == second, "same seed gave different prompt bytes");

  double worst_base = 0, worst_supp = 0;
  for (auto b : {caption::PromptBase::kBrief, caption::PromptBase::kDetailed,
                 caption::PromptBase::kSummarized}) {
    const double share = static_cast<double>(bases[b]) / kDraws;
    worst_base = std::max(worst_base, std::abs(share - 1.0 / 3));
    c.Expect(std::abs(share - 1.0 / 3) <= 0.02,
             std::string(caption::PromptBaseName(b)) + " share " + Fixed(share, 4));
  }
  const int with_supplement = kDraws - bases[caption::PromptBase::kSummarized];
  int supplement_total = 0;
  for (caption::Category cat : caption::kSupplementCategories) {
    supplement_total += supplements[cat];
    const double share = static_cast<double>(supplements[cat]) / with_supplement;
    worst_supp = std::max(worst_supp, std::abs(share - 1.0 / 7));
    c.Expect(std::abs(share - 1.0 / 7) <= 0.03,
             std::string(caption::CategoryKey(cat)) + " share " + Fixed(share, 4));
  }
  c.Expect(supplement_total == with_supplement, "supplement count mismatch");
  return c.Done("30000 draws; max base deviation " + Fixed(worst_base, 4) +
                ", max supplement deviation " + Fixed(worst_supp, 4) +
                "; reruns byte-identical (" + std::to_string(first.size()) + " bytes)");
}

// ----------------------------------------------------------------------- 7

Outcome DurationRules() {
  Check c;
  using clips::ClipSet;
  using Windows = std::vector<std::pair<int64_t, int64_t>>;
  struct Row {
    double seconds;
    int64_t frames;
    ClipSet set;
    Windows windows;
  };
  const std::vector<Row> table = {
      {2.9, 87, ClipSet::kDiscard, {}},
      {3.0, 90, ClipSet::kShort, {}},
      {5.3, 159, ClipSet::kShort, {}},
      {10.0, 300, ClipSet::kShort, {}},
      {10.1, 303, ClipSet::kLong, {{1, 301}}},
      {45, 1350, ClipSet::kLong, {{525, 825}}},
      {60, 1800, ClipSet::kLong, {{750, 1050}}},
      {61, 1830, ClipSet::kLong, {{0, 300}, {765, 1065}, {1530, 1830}}},
      {90, 2700, ClipSet::kLong, {{0, 300}, {1200, 1500}, {2400, 2700}}},
  };
  for (const Row& r : table) {
    const std::string tag = Fixed(r.seconds, 1) + "s";
    c.Expect(clips::Classify(r.seconds) == r.set, tag + " Classify");
    c.Expect(clips::ClassifyFrames(r.frames, 30, 1) == r.set, tag + " ClassifyFrames");
    clips::ClipRecord parent;
    parent.id = "p";
    parent.source_id = "src";
    parent.end_frame = r.frames;
    parent.width = 160;
    parent.height = 96;
    parent = clips::WithSet(parent);
    c.Expect(parent.set == r.set, tag + " WithSet");
    if (r.set != ClipSet::kLong) continue;
    const auto windows = clips::ExtractShortsFromLong(parent);
    Windows got;
    for (size_t k = 0; k < windows.size(); ++k) {
      const auto& w = windows[k];
      got.emplace_back(w.start_frame, w.end_frame);
      c.Expect(w.set == ClipSet::kShort, tag + " window not short");
      c.Expect(w.id == "p.w" + std::to_string(k), tag + " window id " + w.id);
      c.Expect(w.source_id == "src", tag + " window source");
    }
    c.Expect(got == r.windows, tag + " windows");
  }
  c.Expect(clips::SubclipSample(100, 81) == clips::FrameRange{9, 90}, "subclip 100/81");
  c.Expect(clips::SubclipSample(81, 81) == clips::FrameRange{0, 81}, "subclip 81/81");
  c.Expect(clips::SubclipSample(50, 81) == clips::FrameRange{0, 50}, "subclip 50/81");
  return c.Done(std::to_string(table.size()) + " durations classified; 5 long clips, 9 windows");
}

// ----------------------------------------------------------------------- 8

config::PipelineConfig MockConfig(const fs::path& corpus, int workers) {
  config::PipelineConfig c;
  c.workers = workers;
  c.mock_truth = (corpus / "truth.jsonl").string();
  for (providers::Kind k : providers::kAllKinds) c.providers[k].url = "mock://hash";
  c.providers[providers::Kind::kTextBoxes].url = "mock://truth";
  return c;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome ManifestDeterminism(const fs::path& corpus, const fs::path& work) {
  Check c;
  std::vector<std::string> bytes, canonical;
  int64_t entries = 0;
  for (int workers : {1, 8}) {
    const fs::path manifest = work / ("manifest-w" + std::to_string(workers) + ".jsonl");
    pipeline::Pipeline p(MockConfig(corpus, workers), manifest);
    std::vector<pipeline::StageReport> reports;
    reports.push_back(p.Ingest(corpus));
    reports.push_back(p.Split());
    reports.push_back(p.Filter());
    reports.push_back(p.Purify());
    reports.push_back(p.Caption());
    for (const auto& r : reports) {
      c.Expect(r.errors.empty(), std::string(pipeline::StageName(r.stage)) + ": " +
                                     (r.errors.empty() ? "" : r.errors.front()));
    }
    bytes.push_back(Slurp(manifest));
    const manifest::ReadResult read = manifest::ReadAll(manifest);
    c.Expect(read.errors.empty(), "unreadable manifest lines");
    std::string canon;
    for (const auto& e : read.entries) canon += manifest::Canonical(e) + "\n";
    canonical.push_back(std::move(canon));
    entries = static_cast<int64_t>(read.entries.size());
  }
  c.Expect(bytes[0] == bytes[1], "raw manifests differ");
  c.Expect(canonical[0] == canonical[1], "canonical manifests differ");
  c.Expect(canonical[0] == bytes[0], "manifest is not in canonical form");
  return c.Done("workers 1 vs 8: " + std::to_string(entries) + " lines, " +
                std::to_string(bytes[0].size()) + " bytes identical");
}

// ----------------------------------------------------------------------- 9

Outcome GateMonotonicity() {
  Check c;
  const purify::PurifyThresholds t;
  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> vtss(0, 0.03), motion(0, 130), sim(0, 0.5);
  std::bernoulli_distribution attr(0.04);
  int64_t mutations = 0, base_pass = 0;
  auto passes = [&](const purify::ScoreSet& s) {
    const bool strict = purify::GateClip(s, t).pass;
    c.Expect(strict == purify::GateAvailable(s, t).pass, "GateClip and GateAvailable disagree");
    return strict;
  };
  auto degrade = [&](const purify::ScoreSet& base, const purify::ScoreSet& worse,
                     const char* what) {
    ++mutations;
    const bool before = passes(base);
    const bool after = passes(worse);
    c.Expect(!(after && !before), std::string(what) + " turned fail into pass");
    c.Expect(!after, std::string(what) + " degraded set still passes");
  };
  for (int i = 0; i < 10000; ++i) {
    purify::ScoreSet s;
    s.vtss = vtss(rng);
    s.motion = motion(rng);
    s.caption_sim = sim(rng);
    s.attributes.emplace();
    for (bool& a : *s.attributes) a = attr(rng);
    base_pass += passes(s);

    for (size_t k = 0; k < purify::kAttributeCount; ++k) {
      if ((*s.attributes)[k]) continue;
      purify::ScoreSet w = s;
      (*w.attributes)[k] = true;
      degrade(s, w, "attribute flip");
    }
    purify::ScoreSet w = s;
    w.vtss = std::nextafter(t.vtss_min, 0.0) * std::uniform_real_distribution<double>(0, 1)(rng);
    degrade(s, w, "vtss");
    w = s;
    w.caption_sim = std::nextafter(t.caption_sim_min, 0.0) *
                    std::uniform_real_distribution<double>(0, 1)(rng);
    degrade(s, w, "caption_sim");
    w = s;
    w.motion = std::nextafter(t.motion_min, 0.0) * std::uniform_real_distribution<double>(0, 1)(rng);
    degrade(s, w, "motion low");
    w = s;
    w.motion = std::nextafter(t.motion_max, 1e9) + std::uniform_real_distribution<double>(0, 50)(rng);
    degrade(s, w, "motion high");
  }
  return c.Done("10000 sets (" + std::to_string(base_pass) + " passing), " +
                std::to_string(mutations) + " degradations, none passed");
}

// ---------------------------------------------------------------------- 10

struct Throughput {
  Outcome outcome;
  double fps = 0;
};

Throughput FilterThroughput() {
  std::mt19937_64 rng(10);
  std::vector<io::Frame> frames;
  for (int i = 0; i < 4; ++i) frames.push_back(testing::RandomFrame(rng, 1920, 1080));
  const filters::StatThresholds t;
  constexpr int kFrames = 120;
  filters::FilterAccumulator acc(t);
  std::vector<std::vector<filters::TextBox>> boxes;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kFrames; ++i) {
    if (acc.NextIsTextSample()) boxes.push_back({{100, 900, 700, 1000}});
    acc.Push(frames[static_cast<size_t>(i) % frames.size()]);
  }
  const auto report = acc.Finish(boxes);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Throughput r;
  r.fps = kFrames / secs;
  r.outcome.pass = r.fps >= 200.0 && report[filters::Filter::kText].flags.size() == kFrames;
  r.outcome.detail = Fixed(r.fps, 1) + " frames/s on one core at 1920x1080 (goal 200)";
  return r;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int n, const char* name, double budget_s, bool gating,
                    const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_s > 0 && secs > budget_s) {
      o.pass = false;
      o.detail += "; over the " + Fixed(budget_s, 0) + " s budget";
    }
    if (gating) all &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << n << ". " << name << " ("
              << Fixed(secs, 2) << " s" << (gating ? "" : ", non-gating") << "): " << o.detail
              << std::endl;
  };

  TempDir tmp;
  const fs::path corpus = tmp.path / "corpus";
  std::vector<synth::GroundTruth> truth;

  report(1, "threshold fidelity", 1, true, ThresholdFidelity);
  report(2, "filter oracle equivalence", 60, true, FilterOracles);
  report(3, "synthetic closed loop", 300, true, [&] {
    synth::CorpusOptions o;
    o.clips = 200;
    truth = synth::WriteCorpus(corpus, synth::PlanCorpus(o, kCorpusSeed), kCorpusSeed);
    return ClosedLoop(corpus, truth);
  });
  report(4, "scene detection", 120, true, SceneDetection);
  report(5, "motion scorer", 60, true, Motion);
  report(6, "caption sampling law", 30, true, CaptionSampling);
  report(7, "duration and sub-clip rules", 1, true, DurationRules);
  report(8, "manifest determinism", 300, true, [&] {
    if (truth.empty()) return Outcome{false, "corpus unavailable"};
    return ManifestDeterminism(corpus, tmp.path);
  });
  report(9, "gate monotonicity", 0, true, GateMonotonicity);
  report(10, "filter throughput", 0, false, [] { return FilterThroughput().outcome; });

  std::cout << (all ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << std::endl;
  return all ? 0 : 1;
}
