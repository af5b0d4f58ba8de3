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

// Model-backed scorers reached over one JSON protocol. A request is
//   {"clip_id", "kind", "frames": [{"index", "png_base64"}], "payload"}
// and a reply is {"clip_id", "kind", "result": {<kind>: value}}. Endpoints are
// either http:// services or in-process mocks (mock://hash, mock://truth,
// mock://fail) that answer the same protocol deterministically.

#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "uvcurate/caption_engine.hpp"
#include "uvcurate/frame_io.hpp"
#include "uvcurate/purification.hpp"
#include "uvcurate/scene_split.hpp"
#include "uvcurate/stat_filters.hpp"
#include "uvcurate/synth_corpus.hpp"

namespace uvcurate::providers {

enum class Kind {
  kVtss,
  kSimilarity,
  kAttributes,
  kEmbedding,
  kTextBoxes,
  kCaption,
  kSummary,
};
inline constexpr std::array<Kind, 7> kAllKinds = {
    Kind::kVtss,      Kind::kSimilarity, Kind::kAttributes, Kind::kEmbedding,
    Kind::kTextBoxes, Kind::kCaption,    Kind::kSummary};
std::string_view KindName(Kind k);
std::optional<Kind> ParseKind(std::string_view name);

struct Endpoint {
  std::string url;
  int timeout_ms = 30000;
  int max_retries = 3;
  int max_inflight = 4;
  int backoff_ms = 200;  // first retry delay; doubles per attempt
  bool operator==(const Endpoint&) const = default;
};

struct Request {
  std::string clip_id;
  Kind kind = Kind::kVtss;
  std::span<const io::Frame> frames;
  nlohmann::json payload = nlohmann::json::object();
};

// ---------------------------------------------------------------- encoding

std::string Base64Encode(std::span<const uint8_t> bytes);
/// Throws InvalidArgument on characters outside the alphabet or bad padding.
std::vector<uint8_t> Base64Decode(std::string_view text);

std::vector<uint8_t> EncodePng(const io::Frame& frame);
/// Any 8-bit PNG, converted to RGB. Throws MalformedImage.
io::Frame DecodePng(std::span<const uint8_t> bytes, int64_t index);

nlohmann::json EncodeRequest(const Request& request);

struct DecodedRequest {
  std::string clip_id;
  Kind kind = Kind::kVtss;
  std::vector<io::Frame> frames;
  nlohmann::json payload;
};
/// Server side of EncodeRequest. Throws InvalidArgument.
DecodedRequest DecodeRequest(const nlohmann::json& body);

// --------------------------------------------------------------- transport

class Transport {
 public:
  virtual ~Transport() = default;
  /// Full reply object. Throws ProviderUnavailable when no reply could be
  /// obtained, ProviderMalformedResponse when the reply is not JSON.
  virtual nlohmann::json Call(const Request& request) = 0;
};

/// POSTs to one http:// URL. Retries connection failures, timeouts, 429 and
/// 5xx with exponential backoff; at most `max_inflight` calls are on the wire
/// at once across threads.
class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(Endpoint endpoint);
  nlohmann::json Call(const Request& request) override;

  int64_t attempts() const { return attempts_.load(); }

 private:
  Endpoint endpoint_;
  std::string origin_;  // scheme://host:port
  std::string path_;
  std::counting_semaphore<4096> inflight_;
  std::atomic<int64_t> attempts_{0};
};

/// Deterministic stand-in for every model. `hash` derives scores from the
/// clip id and embeddings from mean frame chroma; `truth` additionally reports the
/// text boxes recorded in a synthetic corpus truth file; `fail` is always
/// unavailable.
class MockBackend {
 public:
  enum class Mode { kHash, kTruth, kFail };
  MockBackend(Mode mode, std::filesystem::path truth_file = {});

  /// Reply object for one request, as a service would send it.
  nlohmann::json Respond(std::string_view clip_id, Kind kind,
                         std::span<const io::Frame> frames,
                         const nlohmann::json& payload);

 private:
  const synth::GroundTruth* TruthFor(std::string_view clip_id);

  Mode mode_;
  std::filesystem::path truth_file_;
  std::once_flag truth_once_;
  std::map<std::string, synth::GroundTruth> truth_;
};

class MockTransport final : public Transport {
 public:
  explicit MockTransport(std::shared_ptr<MockBackend> backend)
      : backend_(std::move(backend)) {}
  nlohmann::json Call(const Request& request) override;

 private:
  std::shared_ptr<MockBackend> backend_;
};

struct MockContext {
  // Truth file used by mock://truth when the URL names none.
  std::filesystem::path truth_file;
};

/// http://host[:port]/path or mock://{hash,truth,fail}[?file=PATH]. Throws
/// ConfigError for anything else.
std::shared_ptr<Transport> MakeTransport(const Endpoint& endpoint,
                                         const MockContext& context = {});

// ----------------------------------------------------------------- clients

/// Checks clip id and kind echo and returns result[<kind>]. Throws
/// ProviderMalformedResponse.
const nlohmann::json& ResultOf(const nlohmann::json& reply, std::string_view clip_id,
                               Kind kind);

class VtssClient final : public purify::VtssProvider {
 public:
  explicit VtssClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  double Vtss(std::string_view clip_id, std::span<const io::Frame> frames) override;

 private:
  std::shared_ptr<Transport> t_;
};

class SimilarityClient final : public purify::SimilarityProvider {
 public:
  explicit SimilarityClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  double Similarity(std::string_view clip_id, std::span<const io::Frame> frames,
                    std::string_view caption) override;

 private:
  std::shared_ptr<Transport> t_;
};

class AttributesClient final : public purify::AttributeProvider {
 public:
  explicit AttributesClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  purify::Attributes Judge(std::string_view clip_id,
                           std::span<const io::Frame> frames) override;

 private:
  std::shared_ptr<Transport> t_;
};

class EmbeddingClient final : public split::EmbeddingProvider {
 public:
  explicit EmbeddingClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  std::vector<std::vector<double>> Embed(std::string_view clip_id,
                                         std::span<const io::Frame> frames) override;

 private:
  std::shared_ptr<Transport> t_;
};

class TextBoxClient final : public filters::TextDetectionProvider {
 public:
  explicit TextBoxClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  std::vector<std::vector<filters::TextBox>> Detect(
      std::string_view clip_id, std::span<const io::Frame> frames) override;

 private:
  std::shared_ptr<Transport> t_;
};

class CaptionClient final : public caption::CaptionProvider {
 public:
  explicit CaptionClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  std::map<std::string, std::string> Describe(std::string_view clip_id,
                                              std::span<const io::Frame> frames,
                                              std::string_view prompt) override;

 private:
  std::shared_ptr<Transport> t_;
};

class SummaryClient final : public caption::SummaryProvider {
 public:
  explicit SummaryClient(std::shared_ptr<Transport> t) : t_(std::move(t)) {}
  std::string Summarize(std::string_view clip_id,
                        const caption::StructuredCaption& captions,
                        std::string_view prompt) override;

 private:
  std::shared_ptr<Transport> t_;
};

/// One client per configured kind. Kinds sharing a URL share a transport,
/// and with it the in-flight cap.
class ProviderSet {
 public:
  ProviderSet() = default;
  ProviderSet(const std::map<Kind, Endpoint>& endpoints, const MockContext& context);

  purify::VtssProvider* vtss() const { return vtss_.get(); }
  purify::SimilarityProvider* similarity() const { return similarity_.get(); }
  purify::AttributeProvider* attributes() const { return attributes_.get(); }
  split::EmbeddingProvider* embedding() const { return embedding_.get(); }
  filters::TextDetectionProvider* text() const { return text_.get(); }
  caption::CaptionProvider* caption() const { return caption_.get(); }
  caption::SummaryProvider* summary() const { return summary_.get(); }

  purify::ScoreProviders scores() const {
    return {vtss_.get(), attributes_.get(), similarity_.get(), nullptr};
  }

 private:
  std::unique_ptr<VtssClient> vtss_;
  std::unique_ptr<SimilarityClient> similarity_;
  std::unique_ptr<AttributesClient> attributes_;
  std::unique_ptr<EmbeddingClient> embedding_;
  std::unique_ptr<TextBoxClient> text_;
  std::unique_ptr<CaptionClient> caption_;
  std::unique_ptr<SummaryClient> summary_;
};

}  // namespace uvcurate::providers
