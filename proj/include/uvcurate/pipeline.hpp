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

// Stage orchestration over a manifest: ingest sources, split them into
// clips, then filter, purify and caption clip by clip. Every stage reads the
// latest state per id, processes the eligible entries on a bounded worker
// pool and appends results in id order, so the manifest does not depend on
// the worker count.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uvcurate/config.hpp"
#include "uvcurate/manifest_store.hpp"
#include "uvcurate/providers.hpp"

namespace uvcurate::pipeline {

enum class Stage { kIngest, kSplit, kFilter, kPurify, kCaption, kSample, kStats };
std::string_view StageName(Stage s);
std::optional<Stage> ParseStage(std::string_view name);

struct RunOptions {
  // Provider failures become errors instead of deferrals.
  bool strict_providers = false;
};

struct StageReport {
  Stage stage = Stage::kIngest;
  int64_t candidates = 0;  // entries this stage acted on
  int64_t done_before = 0;  // already past this stage
  int64_t waiting = 0;      // an earlier stage is not complete yet
  int64_t created = 0;      // new ids (ingest, split)
  int64_t appended = 0;     // manifest lines written
  std::map<manifest::Status, int64_t> outcomes;  // resulting status per candidate
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::string output;  // stats tables, sample file path

  int64_t count(manifest::Status s) const;
  /// 1 on any error, 2 when some entry is deferred, else 0.
  int ExitCode() const;
  std::string Summary() const;
};

class Pipeline {
 public:
  /// Opens (or creates) the manifest. Throws ConfigError for an invalid
  /// config or provider URL.
  Pipeline(config::PipelineConfig config, std::filesystem::path manifest,
           RunOptions options = {});

  /// Adds every .y4m file and PNM sequence directory under `corpus` not yet
  /// in the manifest. The id is the file stem; an optional `<stem>.tags`
  /// file lists theme tags, one per line.
  StageReport Ingest(const std::filesystem::path& corpus);
  StageReport Split();
  StageReport Filter();
  StageReport Purify();
  StageReport Caption();
  /// Writes one training prompt and sub-clip range per captioned clip as
  /// JSONL.
  StageReport Sample(const std::filesystem::path& out);
  /// Writes stats.json and stats.txt into `out_dir`.
  StageReport Stats(const std::filesystem::path& out_dir);

  const manifest::ManifestWriter& writer() const { return writer_; }

 private:
  struct Outcome {
    std::vector<manifest::ManifestEntry> entries;
    std::string error;
  };

  StageReport RunEntryStage(Stage stage, manifest::Role role, manifest::Status from,
                           Outcome (Pipeline::*process)(const manifest::ManifestEntry&));
  void Commit(Outcome&& outcome, StageReport& report);
  void WriteIndex();

  Outcome SplitSource(const manifest::ManifestEntry& source);
  Outcome FilterClip(const manifest::ManifestEntry& clip);
  Outcome PurifyClip(const manifest::ManifestEntry& clip);
  Outcome CaptionClip(const manifest::ManifestEntry& clip);

  const manifest::ManifestEntry& SourceOf(const manifest::ManifestEntry& clip) const;

  config::PipelineConfig config_;
  std::filesystem::path manifest_path_;
  RunOptions options_;
  manifest::ManifestWriter writer_;
  providers::ProviderSet providers_;
  // State at the start of the running stage; workers read only this.
  std::map<std::string, manifest::ManifestEntry> snapshot_;
};

}  // namespace uvcurate::pipeline
