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

// Pipeline configuration: every threshold, the worker count, the seed and
// the provider endpoints, read from and written as TOML.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "uvcurate/clip_logic.hpp"
#include "uvcurate/providers.hpp"
#include "uvcurate/purification.hpp"
#include "uvcurate/scene_split.hpp"
#include "uvcurate/stat_filters.hpp"

namespace uvcurate::config {

struct PipelineConfig {
  uint64_t seed = 0;
  int workers = 4;

  split::SplitParams split;
  clips::SideAnchor side_anchor = clips::SideAnchor::kEdges;
  filters::StatThresholds filters;
  purify::PurifyThresholds purify;
  int model_frames = 8;    // frames sent to vtss, attributes and similarity
  int caption_frames = 8;  // frames sent to the captioner
  bool label_categories = false;
  int subclip_frames = 81;

  // Default truth file for mock://truth endpoints.
  std::string mock_truth;
  // Every kind is present; an empty url leaves the kind unconfigured.
  std::map<providers::Kind, providers::Endpoint> providers;

  PipelineConfig();

  /// Throws ConfigError.
  void Validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

/// Throws ConfigError on TOML syntax errors, unknown keys, wrong value types
/// and out-of-range values. Missing keys keep their defaults.
PipelineConfig ParseConfig(std::string_view text, std::string_view source = "config");
PipelineConfig LoadConfig(const std::filesystem::path& path);

/// Every key, in a fixed order; ParseConfig(DumpConfig(c)) == c.
std::string DumpConfig(const PipelineConfig& config);

}  // namespace uvcurate::config
