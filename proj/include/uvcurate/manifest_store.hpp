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

// Curation state as an append-only JSONL manifest. Every stage appends a
// fresh copy of each entry it touches; the last line for an id is the
// current state. Lines are canonical JSON (sorted keys, no whitespace) so
// two runs that reach the same state produce the same bytes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "uvcurate/caption_engine.hpp"
#include "uvcurate/clip_logic.hpp"
#include "uvcurate/frame_io.hpp"
#include "uvcurate/purification.hpp"
#include "uvcurate/scene_split.hpp"
#include "uvcurate/stat_filters.hpp"

namespace uvcurate::manifest {

inline constexpr int kSchemaVersion = 1;

/// Pipeline order. kRejected is terminal; kDeferred remembers the last
/// completed stage and may resume from there.
enum class Status {
  kIngested,
  kSplit,
  kFiltered,
  kPurified,
  kCaptioned,
  kRejected,
  kDeferred,
};
std::string_view StatusName(Status s);
Status ParseStatus(std::string_view name);

enum class Role { kSource, kClip };
std::string_view RoleName(Role r);

struct StreamSummary {
  int width = 0;
  int height = 0;
  int fps_num = 30;
  int fps_den = 1;
  io::Chroma chroma = io::Chroma::k420;
  int64_t frame_count = 0;
  bool operator==(const StreamSummary&) const = default;
};

struct ManifestEntry {
  int schema_version = kSchemaVersion;
  std::string id;
  Role role = Role::kClip;
  Status status = Status::kIngested;
  std::optional<Status> deferred_at;   // set iff status == kDeferred
  std::string defer_reason;

  // Sources.
  std::string source_path;
  std::optional<StreamSummary> stream;
  std::optional<split::CutList> cuts;

  // Clips.
  std::optional<clips::ClipRecord> clip;
  std::optional<split::DissolveResult> dissolve;
  std::optional<filters::FilterReport> filters;
  std::optional<purify::ScoreSet> scores;
  std::optional<caption::StructuredCaption> captions;

  std::vector<std::string> reject_reasons;
  std::vector<std::string> theme_tags;

  /// Stage reached, looking through a deferral.
  Status progress() const;

  /// Throws SchemaViolation when an invariant does not hold.
  void Validate() const;

  bool operator==(const ManifestEntry&) const = default;
};

/// Whether an id at `from` may be rewritten as `to`.
bool TransitionAllowed(const ManifestEntry& from, const ManifestEntry& to);

nlohmann::json ToJson(const ManifestEntry& e);
/// Throws SchemaViolation on a missing or mistyped field.
ManifestEntry FromJson(const nlohmann::json& j);

/// One line, without the newline. Throws SchemaViolation for non-UTF-8 text
/// or non-finite numbers.
std::string Canonical(const ManifestEntry& e);

struct LineError {
  int64_t line = 0;  // 1-based
  std::string message;
};

struct ReadResult {
  std::vector<ManifestEntry> entries;  // file order, one per valid line
  std::vector<int64_t> offsets;        // byte offset of each entry's line
  std::vector<LineError> errors;
};

/// Parses a manifest line by line; bad lines are reported, never fatal.
/// Throws IoError only when the file cannot be read. A missing file reads as
/// empty.
ReadResult ReadAll(const std::filesystem::path& path);
ReadResult ParseManifest(std::string_view text);

/// Latest entry per id, ordered by id.
std::map<std::string, ManifestEntry> LatestById(
    const std::vector<ManifestEntry>& entries);

/// Single writer. Appends are one write(2) on an O_APPEND descriptor, so a
/// concurrent reader sees either the whole line or none of it.
class ManifestWriter {
 public:
  /// Loads the current state of `path` (creating the file if needed) so
  /// status regressions can be refused.
  explicit ManifestWriter(std::filesystem::path path);
  ~ManifestWriter();
  ManifestWriter(const ManifestWriter&) = delete;
  ManifestWriter& operator=(const ManifestWriter&) = delete;

  /// Throws SchemaViolation on an invalid entry or a backwards transition,
  /// IoError when the write fails.
  void Append(const ManifestEntry& entry);

  const std::map<std::string, ManifestEntry>& state() const { return state_; }
  const std::map<std::string, int64_t>& offsets() const { return offsets_; }
  const std::vector<LineError>& load_errors() const { return load_errors_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  int64_t size_ = 0;
  std::mutex mu_;
  std::map<std::string, ManifestEntry> state_;
  std::map<std::string, int64_t> offsets_;
  std::vector<LineError> load_errors_;
};

// Index file: id -> byte offset of the id's latest line. Always rebuildable
// from the manifest.
std::map<std::string, int64_t> BuildIndex(const std::filesystem::path& manifest);
void WriteIndex(const std::filesystem::path& idx,
                const std::map<std::string, int64_t>& offsets);
std::map<std::string, int64_t> ReadIndex(const std::filesystem::path& idx);
/// Reads the single line at `offset`. Throws IoError or SchemaViolation.
ManifestEntry ReadEntryAt(const std::filesystem::path& manifest, int64_t offset);

// ------------------------------------------------------------------ stats

enum class ResolutionClass { k8K, k4K, kOther };
enum class FpsBucket { kUpTo30, kMid, kFrom50 };
std::string_view ResolutionClassName(ResolutionClass r);
std::string_view FpsBucketName(FpsBucket b);
ResolutionClass ClassifyResolution(int width);
/// Exact on the rational: <= 30, (30, 50), >= 50.
FpsBucket ClassifyFps(int fps_num, int fps_den);

inline constexpr int kWordBinWidth = 10;

struct WordHistogram {
  std::map<int64_t, int64_t> bins;  // bin start (multiple of 10) -> count
  int64_t missing = 0;
  int64_t total_words = 0;
  int64_t counted = 0;
  bool operator==(const WordHistogram&) const = default;
};

struct StatsReport {
  int64_t total_entries = 0;  // clip entries
  int64_t rejected = 0;
  int64_t deferred = 0;
  // set -> resolution -> fps -> count, over non-rejected clips
  std::map<std::string, std::map<std::string, std::map<std::string, int64_t>>>
      buckets;
  // caption field key -> histogram, over non-rejected clips
  std::map<std::string, WordHistogram> caption_words;
  std::map<std::string, int64_t> reject_reasons;
  std::map<std::string, int64_t> themes;
  std::map<std::string, int64_t> status_counts;

  int64_t BucketTotal() const;
  bool operator==(const StatsReport&) const = default;
};

/// Uses the latest state per id; source entries are not counted.
StatsReport ComputeStats(const std::vector<ManifestEntry>& entries);
nlohmann::json StatsToJson(const StatsReport& r);
/// Plain-text tables for a terminal.
std::string FormatStats(const StatsReport& r);

}  // namespace uvcurate::manifest
