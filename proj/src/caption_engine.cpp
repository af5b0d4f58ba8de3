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

#include "uvcurate/caption_engine.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "uvcurate/error.hpp"
#include "uvcurate/purification.hpp"

namespace uvcurate::caption {
namespace {

// Kept in sync with prompts/*.txt (checked by caption_engine_test).
constexpr std::string_view kCaptionPrompt =
    R"(You are given frames sampled uniformly from one video clip, in temporal order.
Describe the clip and answer with a single JSON object that has exactly these
nine string fields and nothing else:

  "brief":           one sentence summarising the main subject and action.
  "detailed":        a thorough paragraph covering subjects, actions, objects,
                     spatial layout and how the scene evolves over time.
  "background":      the environment and setting behind the main subject.
  "theme":           the overall theme or topic of the clip.
  "style":           the visual style (e.g. realistic, cinematic, animated).
  "shot_type":       the framing (e.g. close-up, medium shot, aerial shot).
  "camera_movement": how the camera moves (e.g. static, pan left, dolly in).
  "lighting":        the lighting conditions and their quality.
  "atmosphere":      the mood or atmosphere the clip conveys.

Describe only what is visible. Do not mention the frames or this instruction.
)";

constexpr std::string_view kSummaryPrompt =
    R"(Below are nine descriptions of the same video clip, one per aspect (brief,
detailed, background, theme, style, shot type, camera movement, lighting,
atmosphere). Merge them into one fluent paragraph that keeps every concrete
visual detail, removes repetition, and does not contradict any aspect.
Answer with the paragraph only.
)";

bool Blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

}  // namespace

std::string_view CategoryKey(Category c) {
  return kCategoryKeys[static_cast<size_t>(c)];
}

std::optional<Category> ParseCategory(std::string_view key) {
  for (size_t i = 0; i < kCategoryKeys.size(); ++i) {
    if (kCategoryKeys[i] == key) return static_cast<Category>(i);
  }
  return std::nullopt;
}

int WordCount(std::string_view text) {
  int count = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

bool StructuredCaption::categories_complete() const {
  return std::none_of(fields.begin(), fields.end(),
                      [](const std::string& f) { return Blank(f); });
}

std::array<int, kCategoryCount + 1> StructuredCaption::WordCounts() const {
  std::array<int, kCategoryCount + 1> out{};
  for (size_t i = 0; i < kCategoryCount; ++i) out[i] = WordCount(fields[i]);
  out[kCategoryCount] = WordCount(summarized);
  return out;
}

int StructuredCaption::TotalWords() const {
  int total = 0;
  for (int c : WordCounts()) total += c;
  return total;
}

std::string_view CaptionPromptTemplate() { return kCaptionPrompt; }
std::string_view SummaryPromptTemplate() { return kSummaryPrompt; }

StructuredCaption RequestCaptions(std::string_view clip_id,
                                  std::span<const io::Frame> frames,
                                  CaptionProvider& provider,
                                  size_t frame_count) {
  std::vector<io::Frame> sampled;
  for (size_t i : purify::UniformSampleIndices(frames.size(), frame_count)) {
    sampled.push_back(frames[i]);
  }
  const auto reply = provider.Describe(clip_id, sampled, kCaptionPrompt);

  StructuredCaption out;
  for (const auto& [key, value] : reply) {
    const auto category = ParseCategory(key);
    if (!category) {
      throw Error(ErrorCode::kSchemaViolation, "unexpected caption field '" +
                                                   key + "'");
    }
    out[*category] = value;
  }
  for (size_t i = 0; i < kCategoryCount; ++i) {
    if (Blank(out.fields[i])) {
      throw Error(ErrorCode::kSchemaViolation,
                  "caption field '" + std::string(kCategoryKeys[i]) +
                      "' missing or empty");
    }
  }
  return out;
}

const std::string& Summarize(std::string_view clip_id,
                             StructuredCaption& captions,
                             SummaryProvider& provider) {
  for (size_t i = 0; i < kCategoryCount; ++i) {
    if (Blank(captions.fields[i])) {
      throw Error(ErrorCode::kSchemaViolation,
                  "cannot summarize without '" + std::string(kCategoryKeys[i]) +
                      "'");
    }
  }
  std::string summary = provider.Summarize(clip_id, captions, kSummaryPrompt);
  if (Blank(summary)) throw Error(ErrorCode::kEmptySummary, std::string(clip_id));
  captions.summarized = std::move(summary);
  return captions.summarized;
}

std::string_view PromptBaseName(PromptBase b) {
  switch (b) {
    case PromptBase::kBrief: return "brief";
    case PromptBase::kDetailed: return "detailed";
    case PromptBase::kSummarized: return "summarized";
  }
  return "summarized";
}

PromptSample SamplePrompt(const StructuredCaption& captions, UniformSource& rng,
                          const SampleOptions& options) {
  if (!captions.complete()) {
    throw Error(ErrorCode::kIncompleteCaptions,
                "prompt sampling needs all nine categories and the summary");
  }
  auto part = [&](std::string_view label, const std::string& text) {
    return options.label_categories ? std::string(label) + ": " + text : text;
  };

  PromptSample s;
  s.base = static_cast<PromptBase>(rng.Below(3));
  switch (s.base) {
    case PromptBase::kBrief:
      s.text = part(kCategoryLabels[0], captions[Category::kBrief]);
      break;
    case PromptBase::kDetailed:
      s.text = part(kCategoryLabels[1], captions[Category::kDetailed]);
      break;
    case PromptBase::kSummarized:
      s.text = part("Summarized Description", captions.summarized);
      return s;
  }
  const Category extra = kSupplementCategories[rng.Below(7)];
  s.supplement = extra;
  s.text += ' ';
  s.text += part(kCategoryLabels[static_cast<size_t>(extra)], captions[extra]);
  return s;
}

}  // namespace uvcurate::caption
