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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uvcurate {

enum class ErrorCode {
  // frame_io
  kMissingSignature,
  kMissingDimension,
  kUnsupportedChroma,
  kMalformedRational,
  kDimensionTooLarge,
  kOddDimension,
  kTruncatedFrame,
  kBadFrameMarker,
  kMalformedImage,
  // scene_split
  kDimensionMismatch,
  kShortClip,
  // stat_filters
  kInvalidBox,
  kFrameTooSmall,
  kEmptyClip,
  // purification
  kTooFewFrames,
  kIncompleteScores,
  // clip_logic
  kNonPositiveDuration,
  kNotLongClip,
  // caption_engine
  kSchemaViolation,
  kEmptySummary,
  kIncompleteCaptions,
  // providers
  kProviderUnavailable,
  kProviderMalformedResponse,
  // manifest / synth / cli
  kIoError,
  kContradictorySpec,
  kIdMismatch,
  kConfigError,
  kInvalidArgument,
};

std::string_view ToString(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the pipeline in particular) can route on kind rather than text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ToString(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uvcurate
