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

// Structured captions: nine descriptive categories per clip plus a summary
// merged from them, and the training-time prompt sampler that picks one of
// brief / detailed / summarized and, for the first two, appends one of the
// seven remaining categories.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "uvcurate/frame_io.hpp"
#include "uvcurate/rng.hpp"

namespace uvcurate::caption {

enum class Category {
  kBrief = 0,
  kDetailed,
  kBackground,
  kTheme,
  kStyle,
  kShotType,
  kCameraMovement,
  kLighting,
  kAtmosphere,
};

inline constexpr size_t kCategoryCount = 9;

/// Field names used in the manifest and on the wire.
inline constexpr std::array<std::string_view, kCategoryCount> kCategoryKeys = {
    "brief", "detailed", "background", "theme", "style",
    "shot_type", "camera_movement", "lighting", "atmosphere"};

inline constexpr std::array<std::string_view, kCategoryCount> kCategoryLabels = {
    "Brief Description", "Detailed Description", "Background",
    "Theme Description", "Style", "Shot Type", "Camera Movement", "Lighting",
    "Video Atmosphere"};

/// Categories eligible as a supplement, in draw order.
inline constexpr std::array<Category, 7> kSupplementCategories = {
    Category::kBackground, Category::kTheme, Category::kStyle,
    Category::kShotType, Category::kCameraMovement, Category::kLighting,
    Category::kAtmosphere};

/// Reported caption category count: nine categories plus the summary.
inline constexpr int kReportedCategoryCount = 10;

std::string_view CategoryKey(Category c);
std::optional<Category> ParseCategory(std::string_view key);

/// Whitespace-delimited token count.
int WordCount(std::string_view text);

struct StructuredCaption {
  std::array<std::string, kCategoryCount> fields;
  std::string summarized;

  const std::string& operator[](Category c) const {
    return fields[static_cast<size_t>(c)];
  }
  std::string& operator[](Category c) { return fields[static_cast<size_t>(c)]; }

  bool categories_complete() const;
  bool complete() const { return categories_complete() && !summarized.empty(); }

  /// Per-field word counts, nine categories then the summary.
  std::array<int, kCategoryCount + 1> WordCounts() const;
  int TotalWords() const;

  bool operator==(const StructuredCaption&) const = default;
};

std::string_view CaptionPromptTemplate();
std::string_view SummaryPromptTemplate();

class CaptionProvider {
 public:
  virtual ~CaptionProvider() = default;
  /// Raw named fields as returned by the model service.
  virtual std::map<std::string, std::string> Describe(
      std::string_view clip_id, std::span<const io::Frame> frames,
      std::string_view prompt) = 0;
};

class SummaryProvider {
 public:
  virtual ~SummaryProvider() = default;
  virtual std::string Summarize(std::string_view clip_id,
                                const StructuredCaption& captions,
                                std::string_view prompt) = 0;
};

/// Samples `frame_count` frames evenly, asks the provider for the nine
/// categories and validates the reply (SchemaViolation on a missing, extra
/// or empty field).
StructuredCaption RequestCaptions(std::string_view clip_id,
                                  std::span<const io::Frame> frames,
                                  CaptionProvider& provider,
                                  size_t frame_count = 8);

/// Fills `captions.summarized`. SchemaViolation when a category is missing,
/// EmptySummary when the provider returns only whitespace.
const std::string& Summarize(std::string_view clip_id,
                             StructuredCaption& captions,
                             SummaryProvider& provider);

enum class PromptBase { kBrief = 0, kDetailed, kSummarized };
std::string_view PromptBaseName(PromptBase b);

struct PromptSample {
  PromptBase base = PromptBase::kSummarized;
  std::optional<Category> supplement;
  std::string text;
  bool operator==(const PromptSample&) const = default;
};

struct SampleOptions {
  // Prefix each part with "<Category label>: ".
  bool label_categories = false;
};

/// One draw for the base (three equally likely options) and, unless the
/// summary was chosen, one draw among the seven supplements. Throws
/// IncompleteCaptions if any of the ten fields is empty.
PromptSample SamplePrompt(const StructuredCaption& captions, UniformSource& rng,
                          const SampleOptions& options = {});

}  // namespace uvcurate::caption
