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

#include "uvcurate/pipeline.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "uvcurate/caption_engine.hpp"
#include "uvcurate/clip_logic.hpp"
#include "uvcurate/error.hpp"
#include "uvcurate/frame_io.hpp"
#include "uvcurate/purification.hpp"
#include "uvcurate/rng.hpp"
#include "uvcurate/scene_split.hpp"
#include "uvcurate/stat_filters.hpp"
#include "uvcurate/worker_pool.hpp"

namespace uvcurate::pipeline {

using manifest::ManifestEntry;
using manifest::Role;
using manifest::Status;
using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kStageNames = {
    "ingest", "split", "filter", "purify", "caption", "sample", "stats"};

// Failures that come from a model service rather than from our own data.
bool IsProviderFailure(ErrorCode c) {
  switch (c) {
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kProviderMalformedResponse:
    case ErrorCode::kSchemaViolation:
    case ErrorCode::kEmptySummary:
    case ErrorCode::kInvalidBox:
      return true;
    default:
      return false;
  }
}

ManifestEntry Advance(ManifestEntry e, Status to) {
  e.status = to;
  e.deferred_at.reset();
  e.defer_reason.clear();
  return e;
}

ManifestEntry Reject(ManifestEntry e, std::vector<std::string> reasons) {
  e.status = Status::kRejected;
  e.deferred_at.reset();
  e.defer_reason.clear();
  e.reject_reasons = std::move(reasons);
  return e;
}

ManifestEntry Defer(const ManifestEntry& cur, std::string reason) {
  ManifestEntry e = cur;
  e.deferred_at = cur.progress();
  e.status = Status::kDeferred;
  e.defer_reason = std::move(reason);
  return e;
}

// Streams frames [start, end) of a source; fn gets the clip-relative index.
template <typename Fn>
void ForEachFrame(const ManifestEntry& source, int64_t start, int64_t end, Fn&& fn) {
  auto reader = io::OpenSource(source.source_path, source.stream->fps_num,
                               source.stream->fps_den);
  for (int64_t i = 0; i < start; ++i) {
    if (!reader->SkipFrame()) {
      throw Error(ErrorCode::kTruncatedFrame,
                  source.source_path + " ended before frame " + std::to_string(start));
    }
  }
  for (int64_t i = start; i < end; ++i) {
    auto f = reader->NextFrame();
    if (!f) {
      throw Error(ErrorCode::kTruncatedFrame,
                  source.source_path + " ended before frame " + std::to_string(i));
    }
    fn(i - start, std::move(*f));
  }
}

std::string FormatIndex(size_t k) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%03zu", k);
  return buf;
}

std::vector<std::string> ReadTags(const std::filesystem::path& path) {
  std::vector<std::string> tags;
  std::ifstream in(path);
  if (!in) return tags;
  std::string line;
  while (std::getline(in, line)) {
    const size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const size_t e = line.find_last_not_of(" \t\r");
    tags.push_back(line.substr(b, e - b + 1));
  }
  return tags;
}

void WriteAtomically(const std::filesystem::path& path, const std::string& data) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << data;
    if (!out.flush()) throw Error(ErrorCode::kIoError, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename " + tmp + ": " + ec.message());
}

}  // namespace

std::string_view StageName(Stage s) { return kStageNames[static_cast<size_t>(s)]; }

std::optional<Stage> ParseStage(std::string_view name) {
  for (size_t i = 0; i < kStageNames.size(); ++i) {
    if (kStageNames[i] == name) return static_cast<Stage>(i);
  }
  return std::nullopt;
}

int64_t StageReport::count(Status s) const {
  auto it = outcomes.find(s);
  return it == outcomes.end() ? 0 : it->second;
}

int StageReport::ExitCode() const {
  if (!errors.empty()) return 1;
  return count(Status::kDeferred) > 0 ? 2 : 0;
}

std::string StageReport::Summary() const {
  std::ostringstream o;
  o << StageName(stage) << ": " << candidates << " processed";
  for (const auto& [status, n] : outcomes) o << ", " << n << " " << manifest::StatusName(status);
  o << "; " << created << " new, " << appended << " lines appended, " << done_before
    << " already done, " << waiting << " waiting on an earlier stage, " << errors.size()
    << " error(s)";
  return o.str();
}

Pipeline::Pipeline(config::PipelineConfig config, std::filesystem::path manifest,
                   RunOptions options)
    : config_(std::move(config)),
      manifest_path_(std::move(manifest)),
      options_(options),
      writer_(manifest_path_) {
  config_.Validate();
  providers_ = providers::ProviderSet(config_.providers, {config_.mock_truth});
}

void Pipeline::WriteIndex() {
  manifest::WriteIndex(manifest_path_.string() + ".idx", writer_.offsets());
}

void Pipeline::Commit(Outcome&& outcome, StageReport& report) {
  if (!outcome.error.empty()) report.errors.push_back(std::move(outcome.error));
  for (auto& e : outcome.entries) {
    const auto& state = writer_.state();
    auto it = state.find(e.id);
    const bool is_new = it == state.end();
    // Clips and sources count once per candidate; split also creates clips.
    if (is_new) {
      ++report.created;
    } else {
      ++report.outcomes[e.status];
    }
    if (!is_new && it->second == e) continue;
    writer_.Append(e);
    ++report.appended;
  }
}

StageReport Pipeline::RunEntryStage(Stage stage, Role role, Status from,
                                    Outcome (Pipeline::*process)(const ManifestEntry&)) {
  StageReport report;
  report.stage = stage;
  for (const auto& le : writer_.load_errors()) {
    report.warnings.push_back(manifest_path_.string() + ":" + std::to_string(le.line) + ": " +
                              le.message);
  }
  snapshot_ = writer_.state();

  std::vector<const ManifestEntry*> work;
  for (const auto& [id, e] : snapshot_) {
    if (e.role != role) continue;
    if (e.status == Status::kRejected || e.progress() > from) {
      ++report.done_before;
    } else if (e.progress() < from) {
      ++report.waiting;
    } else {
      work.push_back(&e);
    }
  }
  report.candidates = static_cast<int64_t>(work.size());

  OrderedParallel<Outcome>(
      config_.workers, work.size(),
      [&](size_t i) -> Outcome {
        const ManifestEntry& cur = *work[i];
        try {
          return (this->*process)(cur);
        } catch (const Error& e) {
          if (IsProviderFailure(e.code()) && !options_.strict_providers) {
            return {{Defer(cur, e.what())}, {}};
          }
          return {{}, cur.id + ": " + e.what()};
        } catch (const std::exception& e) {
          return {{}, cur.id + ": " + e.what()};
        }
      },
      [&](size_t, Outcome&& o) { Commit(std::move(o), report); });
  snapshot_.clear();
  WriteIndex();
  return report;
}

const ManifestEntry& Pipeline::SourceOf(const ManifestEntry& clip) const {
  auto it = snapshot_.find(clip.clip->source_id);
  if (it == snapshot_.end() || it->second.role != Role::kSource || !it->second.stream) {
    throw Error(ErrorCode::kIoError, "source '" + clip.clip->source_id + "' of " + clip.id +
                                         " is not in the manifest");
  }
  return it->second;
}

// ------------------------------------------------------------------ ingest

StageReport Pipeline::Ingest(const std::filesystem::path& corpus) {
  StageReport report;
  report.stage = Stage::kIngest;
  for (const auto& le : writer_.load_errors()) {
    report.warnings.push_back(manifest_path_.string() + ":" + std::to_string(le.line) + ": " +
                              le.message);
  }

  std::error_code ec;
  std::vector<std::filesystem::path> inputs;
  for (const auto& d : std::filesystem::directory_iterator(corpus, ec)) {
    if (d.is_regular_file() && d.path().extension() == ".y4m") {
      inputs.push_back(d.path());
    } else if (d.is_directory() && io::PnmSequenceReader::LooksLikeSequence(d.path())) {
      inputs.push_back(d.path());
    }
  }
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot list " + corpus.string() + ": " + ec.message());
  }
  std::sort(inputs.begin(), inputs.end());

  std::vector<std::filesystem::path> work;
  std::set<std::string> ids;
  for (const auto& p : inputs) {
    const std::string id = p.stem().string();
    if (!ids.insert(id).second) {
      report.errors.push_back(p.string() + ": id '" + id + "' is used by another input");
    } else if (writer_.state().count(id)) {
      ++report.done_before;
    } else {
      work.push_back(p);
    }
  }
  report.candidates = static_cast<int64_t>(work.size());

  OrderedParallel<Outcome>(
      config_.workers, work.size(),
      [&](size_t i) -> Outcome {
        const auto& path = work[i];
        try {
          auto reader = io::OpenSource(path);
          const io::StreamMeta meta = reader->meta();
          int64_t frames = 0;
          while (reader->SkipFrame()) ++frames;
          if (frames == 0) throw Error(ErrorCode::kEmptyClip, "no frames");
          ManifestEntry e;
          e.id = path.stem().string();
          e.role = Role::kSource;
          e.status = Status::kIngested;
          e.source_path = path.lexically_normal().string();
          e.stream = manifest::StreamSummary{meta.width,  meta.height, meta.fps_num,
                                             meta.fps_den, meta.chroma, frames};
          auto tags_path = path;
          tags_path.replace_extension(".tags");
          e.theme_tags = ReadTags(tags_path);
          return {{std::move(e)}, {}};
        } catch (const Error& e) {
          return {{}, path.string() + ": " + e.what()};
        }
      },
      [&](size_t, Outcome&& o) {
        if (!o.entries.empty()) ++report.outcomes[Status::kIngested];
        Commit(std::move(o), report);
      });
  WriteIndex();
  return report;
}

// ------------------------------------------------------------------- split

StageReport Pipeline::Split() {
  return RunEntryStage(Stage::kSplit, Role::kSource, Status::kIngested,
                       &Pipeline::SplitSource);
}

Pipeline::Outcome Pipeline::SplitSource(const ManifestEntry& source) {
  const manifest::StreamSummary& s = *source.stream;
  split::ScoreAccumulator scores;
  ForEachFrame(source, 0, s.frame_count,
               [&](int64_t, io::Frame&& f) { scores.Push(f); });
  const split::CutList cuts = split::DetectCuts(scores.scores(), config_.split);

  Outcome out;
  auto add_clip = [&](clips::ClipRecord rec) {
    ManifestEntry e;
    e.id = rec.id;
    e.role = Role::kClip;
    e.status = Status::kSplit;
    e.theme_tags = source.theme_tags;
    e.clip = std::move(rec);
    if (e.clip->set == clips::ClipSet::kDiscard) e = Reject(std::move(e), {"duration"});
    // A clip that already exists was written by an earlier, interrupted run.
    if (!snapshot_.count(e.id)) out.entries.push_back(std::move(e));
  };
  const auto segments = cuts.Segments();
  for (size_t k = 0; k < segments.size(); ++k) {
    clips::ClipRecord rec;
    rec.id = source.id + ".s" + FormatIndex(k);
    rec.source_id = source.id;
    rec.start_frame = segments[k].first;
    rec.end_frame = segments[k].second;
    rec.fps_num = s.fps_num;
    rec.fps_den = s.fps_den;
    rec.width = s.width;
    rec.height = s.height;
    rec = clips::WithSet(std::move(rec));
    add_clip(rec);
    if (rec.set == clips::ClipSet::kLong) {
      for (auto& w : clips::ExtractShortsFromLong(rec, config_.side_anchor)) add_clip(w);
    }
  }
  ManifestEntry done = Advance(source, Status::kSplit);
  done.cuts = cuts;
  out.entries.push_back(std::move(done));
  return out;
}

// ------------------------------------------------------------------ filter

StageReport Pipeline::Filter() {
  return RunEntryStage(Stage::kFilter, Role::kClip, Status::kSplit, &Pipeline::FilterClip);
}

Pipeline::Outcome Pipeline::FilterClip(const ManifestEntry& cur) {
  const clips::ClipRecord& c = *cur.clip;
  split::EmbeddingProvider* embedder = providers_.embedding();
  constexpr size_t kEdge = split::kDissolveEdgeFrames;
  const bool check_dissolve = embedder && c.frames() >= static_cast<int64_t>(2 * kEdge);

  filters::FilterAccumulator acc(config_.filters);
  std::vector<io::Frame> text_frames;
  std::vector<io::Frame> edges;
  std::deque<io::Frame> tail;
  ForEachFrame(SourceOf(cur), c.start_frame, c.end_frame, [&](int64_t, io::Frame&& f) {
    if (acc.NextIsTextSample()) text_frames.push_back(f);
    acc.Push(f);
    if (!check_dissolve) return;
    if (edges.size() < kEdge) edges.push_back(f);
    tail.push_back(std::move(f));
    if (tail.size() > kEdge) tail.pop_front();
  });

  std::optional<split::DissolveResult> dissolve;
  if (check_dissolve) {
    edges.insert(edges.end(), std::make_move_iterator(tail.begin()),
                 std::make_move_iterator(tail.end()));
    dissolve = split::DissolveFlag(edges, *embedder, config_.split, cur.id);
  }

  std::optional<filters::FilterReport> report;
  std::string text_failure;
  if (filters::TextDetectionProvider* text = providers_.text()) {
    try {
      report = acc.Finish(text->Detect(cur.id, text_frames));
    } catch (const Error& e) {
      if (!IsProviderFailure(e.code()) || options_.strict_providers) throw;
      text_failure = e.what();
    }
  } else {
    text_failure = "no textboxes provider configured";
  }

  std::vector<std::string> reasons;
  const filters::FilterReport judged =
      report ? *report
             : acc.Finish(std::vector<std::vector<filters::TextBox>>(text_frames.size()));
  for (filters::Filter f : judged.Failed()) {
    if (f == filters::Filter::kText && !report) continue;
    reasons.push_back("filter:" + std::string(filters::FilterName(f)));
  }
  if (dissolve && dissolve->flagged) reasons.push_back("dissolve");

  ManifestEntry e = cur;
  e.dissolve = dissolve;
  // Without text boxes the text verdict is unknown, so no report is stored.
  e.filters = report;
  if (!reasons.empty()) return {{Reject(std::move(e), std::move(reasons))}, {}};
  if (!report) {
    if (options_.strict_providers) throw Error(ErrorCode::kProviderUnavailable, text_failure);
    return {{Defer(cur, text_failure)}, {}};
  }
  return {{Advance(std::move(e), Status::kFiltered)}, {}};
}

// ------------------------------------------------------------------ purify

StageReport Pipeline::Purify() {
  return RunEntryStage(Stage::kPurify, Role::kClip, Status::kFiltered, &Pipeline::PurifyClip);
}

Pipeline::Outcome Pipeline::PurifyClip(const ManifestEntry& cur) {
  const clips::ClipRecord& c = *cur.clip;
  const size_t n = static_cast<size_t>(c.frames());
  const size_t model_frames = static_cast<size_t>(config_.model_frames);
  const purify::ScoreProviders scorers = providers_.scores();
  if (!scorers.vtss || !scorers.attributes) {
    throw Error(ErrorCode::kProviderUnavailable,
                std::string("no ") + (scorers.vtss ? "attributes" : "vtss") +
                    " provider configured");
  }

  std::set<size_t> needed;
  for (size_t i : purify::UniformSampleIndices(n, model_frames)) needed.insert(i);
  for (const auto& [a, b] : purify::MotionPairs(n, config_.purify.flow_sample_interval)) {
    needed.insert(a);
    needed.insert(b);
  }
  std::map<size_t, io::Frame> kept;
  ForEachFrame(SourceOf(cur), c.start_frame, c.end_frame, [&](int64_t i, io::Frame&& f) {
    if (needed.count(static_cast<size_t>(i))) kept.emplace(static_cast<size_t>(i), std::move(f));
  });

  const purify::ScoreSet scores = purify::FetchScores(
      cur.id, n, [&](size_t i) -> const io::Frame& { return kept.at(i); }, scorers,
      config_.purify, std::nullopt, model_frames);
  const purify::GateResult gate = purify::GateAvailable(scores, config_.purify);

  ManifestEntry e = cur;
  e.scores = scores;
  if (!gate.pass) return {{Reject(std::move(e), gate.reasons)}, {}};
  return {{Advance(std::move(e), Status::kPurified)}, {}};
}

// ----------------------------------------------------------------- caption

StageReport Pipeline::Caption() {
  return RunEntryStage(Stage::kCaption, Role::kClip, Status::kPurified, &Pipeline::CaptionClip);
}

Pipeline::Outcome Pipeline::CaptionClip(const ManifestEntry& cur) {
  caption::CaptionProvider* captioner = providers_.caption();
  caption::SummaryProvider* summarizer = providers_.summary();
  purify::SimilarityProvider* similarity = providers_.similarity();
  for (auto [missing, kind] : {std::pair{!captioner, "caption"},
                               std::pair{!summarizer, "summary"},
                               std::pair{!similarity, "similarity"}}) {
    if (missing) {
      throw Error(ErrorCode::kProviderUnavailable,
                  std::string("no ") + kind + " provider configured");
    }
  }

  const clips::ClipRecord& c = *cur.clip;
  const size_t n = static_cast<size_t>(c.frames());
  const auto caption_idx = purify::UniformSampleIndices(n, config_.caption_frames);
  const auto model_idx = purify::UniformSampleIndices(n, config_.model_frames);
  std::set<size_t> needed(caption_idx.begin(), caption_idx.end());
  needed.insert(model_idx.begin(), model_idx.end());
  std::map<size_t, io::Frame> kept;
  ForEachFrame(SourceOf(cur), c.start_frame, c.end_frame, [&](int64_t i, io::Frame&& f) {
    if (needed.count(static_cast<size_t>(i))) kept.emplace(static_cast<size_t>(i), std::move(f));
  });
  auto pick = [&](const std::vector<size_t>& idx) {
    std::vector<io::Frame> out;
    for (size_t i : idx) out.push_back(kept.at(i));
    return out;
  };

  const auto caption_frames = pick(caption_idx);
  caption::StructuredCaption captions =
      caption::RequestCaptions(cur.id, caption_frames, *captioner, caption_frames.size());
  caption::Summarize(cur.id, captions, *summarizer);
  const auto model_frames = pick(model_idx);

  ManifestEntry e = cur;
  e.scores->caption_sim = similarity->Similarity(cur.id, model_frames, captions.summarized);
  e.captions = std::move(captions);
  const purify::GateResult gate = purify::GateClip(*e.scores, config_.purify);
  if (!gate.pass) return {{Reject(std::move(e), gate.reasons)}, {}};
  return {{Advance(std::move(e), Status::kCaptioned)}, {}};
}

// ------------------------------------------------------------ sample/stats

StageReport Pipeline::Sample(const std::filesystem::path& out) {
  StageReport report;
  report.stage = Stage::kSample;
  const caption::SampleOptions options{config_.label_categories};
  std::string lines;
  for (const auto& [id, e] : writer_.state()) {
    if (e.role != Role::kClip) continue;
    if (e.status != Status::kCaptioned) {
      ++(e.status == Status::kRejected ? report.done_before : report.waiting);
      continue;
    }
    ++report.candidates;
    Xoshiro256 rng(config_.seed, id);
    const caption::PromptSample p = caption::SamplePrompt(*e.captions, rng, options);
    const clips::FrameRange r = clips::SubclipSample(e.clip->frames(), config_.subclip_frames);
    json line = {{"clip_id", id},
                 {"source_id", e.clip->source_id},
                 {"base", caption::PromptBaseName(p.base)},
                 {"supplement", p.supplement ? json(caption::CategoryKey(*p.supplement))
                                             : json(nullptr)},
                 {"prompt", p.text},
                 {"start_frame", e.clip->start_frame + r.start},
                 {"end_frame", e.clip->start_frame + r.end}};
    lines += line.dump(-1, ' ', false, json::error_handler_t::strict);
    lines += '\n';
  }
  WriteAtomically(out, lines);
  report.output = out.string();
  return report;
}

StageReport Pipeline::Stats(const std::filesystem::path& out_dir) {
  StageReport report;
  report.stage = Stage::kStats;
  std::vector<ManifestEntry> latest;
  for (const auto& [id, e] : writer_.state()) latest.push_back(e);
  const manifest::StatsReport stats = manifest::ComputeStats(latest);
  report.candidates = stats.total_entries;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string());
  report.output = manifest::FormatStats(stats);
  WriteAtomically(out_dir / "stats.json", manifest::StatsToJson(stats).dump(2) + "\n");
  WriteAtomically(out_dir / "stats.txt", report.output);
  return report;
}

}  // namespace uvcurate::pipeline
