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

#include "uvcurate/error.hpp"

namespace uvcurate {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingSignature: return "MissingSignature";
    case ErrorCode::kMissingDimension: return "MissingDimension";
    case ErrorCode::kUnsupportedChroma: return "UnsupportedChroma";
    case ErrorCode::kMalformedRational: return "MalformedRational";
    case ErrorCode::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::kOddDimension: return "OddDimension";
    case ErrorCode::kTruncatedFrame: return "TruncatedFrame";
    case ErrorCode::kBadFrameMarker: return "BadFrameMarker";
    case ErrorCode::kMalformedImage: return "MalformedImage";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kShortClip: return "ShortClip";
    case ErrorCode::kInvalidBox: return "InvalidBox";
    case ErrorCode::kFrameTooSmall: return "FrameTooSmall";
    case ErrorCode::kEmptyClip: return "EmptyClip";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kIncompleteScores: return "IncompleteScores";
    case ErrorCode::kNonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::kNotLongClip: return "NotLongClip";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kEmptySummary: return "EmptySummary";
    case ErrorCode::kIncompleteCaptions: return "IncompleteCaptions";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kProviderMalformedResponse:
      return "ProviderMalformedResponse";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kContradictorySpec: return "ContradictorySpec";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace uvcurate
