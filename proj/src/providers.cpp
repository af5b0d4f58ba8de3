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

#include "uvcurate/providers.hpp"

#include <png.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "httplib.h"
#include "uvcurate/error.hpp"
#include "uvcurate/rng.hpp"

namespace uvcurate::providers {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kKindNames = {
    "vtss", "similarity", "attributes", "embedding", "textboxes", "caption", "summary"};

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

[[noreturn]] void Malformed(std::string_view clip_id, Kind kind, const std::string& msg) {
  throw Error(ErrorCode::kProviderMalformedResponse,
              std::string(KindName(kind)) + " reply for " + std::string(clip_id) + ": " + msg);
}

}  // namespace

std::string_view KindName(Kind k) { return kKindNames[static_cast<size_t>(k)]; }

std::optional<Kind> ParseKind(std::string_view name) {
  for (size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<Kind>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- encoding

std::string Base64Encode(std::span<const uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[v >> 18];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    const bool two = i + 1 < bytes.size();
    const uint32_t v = (bytes[i] << 16) | (two ? bytes[i + 1] << 8 : 0);
    out += kAlphabet[v >> 18];
    out += kAlphabet[(v >> 12) & 63];
    out += two ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<uint8_t> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "base64 length is not a multiple of 4");
  }
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    const int pad = last ? (text[i + 3] == '=') + (text[i + 2] == '=') : 0;
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      const int d = (k >= 4 - pad) ? 0 : value(c);
      if (d < 0) throw Error(ErrorCode::kInvalidArgument, "bad base64 character");
      v = (v << 6) | static_cast<uint32_t>(d);
    }
    if (pad == 1 && text[i + 2] == '=') {
      throw Error(ErrorCode::kInvalidArgument, "bad base64 padding");
    }
    out.push_back(static_cast<uint8_t>(v >> 16));
    if (pad < 2) out.push_back(static_cast<uint8_t>(v >> 8));
    if (pad < 1) out.push_back(static_cast<uint8_t>(v));
  }
  return out;
}

std::vector<uint8_t> EncodePng(const io::Frame& frame) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(frame.width);
  img.height = static_cast<png_uint_32>(frame.height);
  img.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, frame.rgb.data(), 0, nullptr)) {
    throw Error(ErrorCode::kMalformedImage, std::string("png: ") + img.message);
  }
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, frame.rgb.data(), 0, nullptr)) {
    throw Error(ErrorCode::kMalformedImage, std::string("png: ") + img.message);
  }
  out.resize(size);
  return out;
}

io::Frame DecodePng(std::span<const uint8_t> bytes, int64_t index) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::kMalformedImage, std::string("png: ") + img.message);
  }
  if (int64_t{img.width} * img.height > io::kMaxPixels) {
    png_image_free(&img);
    throw Error(ErrorCode::kDimensionTooLarge, "png frame too large");
  }
  img.format = PNG_FORMAT_RGB;
  io::Frame f;
  f.index = index;
  f.width = static_cast<int>(img.width);
  f.height = static_cast<int>(img.height);
  f.rgb.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, f.rgb.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kMalformedImage, "png: " + msg);
  }
  return f;
}

json EncodeRequest(const Request& r) {
  json frames = json::array();
  for (const auto& f : r.frames) {
    frames.push_back({{"index", f.index}, {"png_base64", Base64Encode(EncodePng(f))}});
  }
  return {{"clip_id", r.clip_id},
          {"kind", KindName(r.kind)},
          {"frames", std::move(frames)},
          {"payload", r.payload}};
}

DecodedRequest DecodeRequest(const json& body) {
  try {
    DecodedRequest r;
    r.clip_id = body.at("clip_id").get<std::string>();
    const auto kind = ParseKind(body.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown kind");
    r.kind = *kind;
    for (const json& f : body.at("frames")) {
      const auto png = Base64Decode(f.at("png_base64").get<std::string>());
      r.frames.push_back(DecodePng(png, f.at("index").get<int64_t>()));
    }
    r.payload = body.value("payload", json::object());
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("request: ") + e.what());
  }
}

// --------------------------------------------------------------- transport

HttpTransport::HttpTransport(Endpoint endpoint)
    : endpoint_(std::move(endpoint)),
      inflight_(std::clamp(endpoint_.max_inflight, 1, 4096)) {
  constexpr std::string_view kScheme = "http://";
  const std::string& url = endpoint_.url;
  if (url.rfind(kScheme, 0) != 0) {
    throw Error(ErrorCode::kConfigError, "unsupported provider url '" + url + "'");
  }
  const size_t slash = url.find('/', kScheme.size());
  origin_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url.substr(slash);
  if (origin_.size() == kScheme.size()) {
    throw Error(ErrorCode::kConfigError, "provider url '" + url + "' has no host");
  }
}

json HttpTransport::Call(const Request& request) {
  const std::string body = EncodeRequest(request).dump();
  const auto timeout = std::chrono::milliseconds(std::max(1, endpoint_.timeout_ms));
  std::string last_error;
  const int attempts = 1 + std::max(0, endpoint_.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const int64_t delay = std::min<int64_t>(
          int64_t{std::max(0, endpoint_.backoff_ms)} << std::min(attempt - 1, 20), 30000);
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    httplib::Result res;
    {
      inflight_.acquire();
      struct Release {
        std::counting_semaphore<4096>& s;
        ~Release() { s.release(); }
      } release{inflight_};
      httplib::Client client(origin_);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      ++attempts_;
      res = client.Post(path_, body, "application/json");
    }
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kProviderUnavailable,
                  endpoint_.url + " answered HTTP " + std::to_string(res->status));
    }
    json reply = json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) Malformed(request.clip_id, request.kind, "body is not JSON");
    return reply;
  }
  throw Error(ErrorCode::kProviderUnavailable,
              endpoint_.url + " failed after " + std::to_string(attempts) +
                  " attempt(s): " + last_error);
}

namespace {

constexpr std::array<std::string_view, 48> kWords = {
    "a",      "the",     "slow",    "bright",  "river",   "city",    "forest",
    "camera", "light",   "shadow",  "moves",   "across",  "over",    "quiet",
    "street", "mountain", "water",  "sky",     "clouds",  "warm",    "cool",
    "golden", "evening", "morning", "scene",   "wide",    "close",   "people",
    "walk",   "through", "along",   "green",   "blue",    "soft",    "sharp",
    "detail", "texture", "calm",    "busy",    "road",    "field",   "tree",
    "window", "reflects", "glow",   "drifts",  "under",   "framed"};

std::string Words(Xoshiro256& rng, int lo, int hi) {
  const int n = lo + static_cast<int>(rng.Below(static_cast<uint64_t>(hi - lo + 1)));
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += kWords[rng.Below(kWords.size())];
  }
  return out;
}

// Mean chroma of the frame plus a fixed neutral component of 40 chroma
// units. Frames of one palette score 1, palettes 120 degrees apart about
// 0.25 and a near-gray frame against any palette about 0.7.
std::vector<double> ColorEmbedding(const io::Frame& f) {
  const size_t n = f.pixel_count();
  double cb = 0, cr = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = f.rgb[3 * i], g = f.rgb[3 * i + 1], b = f.rgb[3 * i + 2];
    cb += -0.168736 * r - 0.331264 * g + 0.5 * b;
    cr += 0.5 * r - 0.418688 * g - 0.081312 * b;
  }
  std::vector<double> v = {cb / static_cast<double>(n), cr / static_cast<double>(n), 40.0};
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

MockBackend::MockBackend(Mode mode, std::filesystem::path truth_file)
    : mode_(mode), truth_file_(std::move(truth_file)) {}

const synth::GroundTruth* MockBackend::TruthFor(std::string_view clip_id) {
  std::call_once(truth_once_, [&] {
    if (truth_file_.empty()) {
      throw Error(ErrorCode::kConfigError, "mock://truth needs a truth file");
    }
    for (auto& t : synth::ReadTruthFile(truth_file_)) truth_.emplace(t.id, std::move(t));
  });
  // Clip ids extend their source id with ".<suffix>" segments.
  std::string_view key = clip_id;
  while (true) {
    if (auto it = truth_.find(std::string(key)); it != truth_.end()) return &it->second;
    const size_t dot = key.rfind('.');
    if (dot == std::string_view::npos) return nullptr;
    key = key.substr(0, dot);
  }
}

json MockBackend::Respond(std::string_view clip_id, Kind kind,
                          std::span<const io::Frame> frames, const json& payload) {
  if (mode_ == Mode::kFail) {
    throw Error(ErrorCode::kProviderUnavailable, "mock://fail");
  }
  Xoshiro256 rng(Fnv1a64(clip_id), KindName(kind));
  json value;
  switch (kind) {
    case Kind::kVtss:
      value = 0.05 + 0.9 * rng.Unit();
      break;
    case Kind::kSimilarity:
      value = 0.25 + 0.5 * rng.Unit();
      break;
    case Kind::kAttributes: {
      value = json::object();
      for (auto name : purify::kAttributeNames) value[std::string(name)] = false;
      break;
    }
    case Kind::kEmbedding: {
      value = json::array();
      for (const auto& f : frames) value.push_back(ColorEmbedding(f));
      break;
    }
    case Kind::kTextBoxes: {
      value = json::array();
      const synth::GroundTruth* truth = mode_ == Mode::kTruth ? TruthFor(clip_id) : nullptr;
      for (const auto& f : frames) {
        json boxes = json::array();
        if (truth) {
          for (const auto& d : truth->spec.defects) {
            if (d.kind != synth::DefectKind::kTextOverlay || f.index < d.start ||
                f.index >= d.end) {
              continue;
            }
            for (const auto& b : d.geometry) {
              boxes.push_back({{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}});
            }
          }
        }
        value.push_back(std::move(boxes));
      }
      break;
    }
    case Kind::kCaption: {
      value = json::object();
      const std::array<std::pair<int, int>, caption::kCategoryCount> lengths = {
          {{8, 16}, {40, 90}, {10, 25}, {4, 10}, {4, 10}, {2, 5}, {3, 8}, {5, 12}, {4, 10}}};
      for (size_t i = 0; i < caption::kCategoryCount; ++i) {
        value[std::string(caption::kCategoryKeys[i])] =
            Words(rng, lengths[i].first, lengths[i].second);
      }
      break;
    }
    case Kind::kSummary: {
      const json& c = payload.contains("captions") ? payload["captions"] : json::object();
      value = c.value("brief", std::string()) + " " + c.value("background", std::string()) +
              " " + c.value("atmosphere", std::string());
      break;
    }
  }
  return {{"clip_id", clip_id},
          {"kind", KindName(kind)},
          {"result", {{std::string(KindName(kind)), std::move(value)}}}};
}

json MockTransport::Call(const Request& r) {
  return backend_->Respond(r.clip_id, r.kind, r.frames, r.payload);
}

std::shared_ptr<Transport> MakeTransport(const Endpoint& endpoint, const MockContext& context) {
  constexpr std::string_view kMock = "mock://";
  const std::string& url = endpoint.url;
  if (url.rfind(kMock, 0) != 0) return std::make_shared<HttpTransport>(endpoint);
  std::string rest = url.substr(kMock.size());
  std::filesystem::path file = context.truth_file;
  if (const size_t q = rest.find('?'); q != std::string::npos) {
    const std::string query = rest.substr(q + 1);
    rest.resize(q);
    if (query.rfind("file=", 0) != 0) {
      throw Error(ErrorCode::kConfigError, "unknown mock option in '" + url + "'");
    }
    file = query.substr(5);
  }
  MockBackend::Mode mode;
  if (rest == "hash") {
    mode = MockBackend::Mode::kHash;
  } else if (rest == "truth") {
    mode = MockBackend::Mode::kTruth;
  } else if (rest == "fail") {
    mode = MockBackend::Mode::kFail;
  } else {
    throw Error(ErrorCode::kConfigError, "unknown mock '" + url + "'");
  }
  return std::make_shared<MockTransport>(std::make_shared<MockBackend>(mode, file));
}

// ----------------------------------------------------------------- clients

const json& ResultOf(const json& reply, std::string_view clip_id, Kind kind) {
  if (!reply.is_object()) Malformed(clip_id, kind, "reply is not an object");
  auto id = reply.find("clip_id");
  if (id == reply.end() || !id->is_string() || id->get<std::string>() != clip_id) {
    Malformed(clip_id, kind, "clip_id does not match the request");
  }
  auto k = reply.find("kind");
  if (k == reply.end() || !k->is_string() || k->get<std::string>() != KindName(kind)) {
    Malformed(clip_id, kind, "kind does not match the request");
  }
  auto result = reply.find("result");
  if (result == reply.end() || !result->is_object()) Malformed(clip_id, kind, "no result object");
  auto value = result->find(std::string(KindName(kind)));
  if (value == result->end()) Malformed(clip_id, kind, "result has no value");
  return *value;
}

namespace {

double FiniteNumber(const json& v, std::string_view clip_id, Kind kind) {
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    Malformed(clip_id, kind, "expected a finite number");
  }
  return v.get<double>();
}

}  // namespace

double VtssClient::Vtss(std::string_view clip_id, std::span<const io::Frame> frames) {
  const json reply = t_->Call({std::string(clip_id), Kind::kVtss, frames});
  return FiniteNumber(ResultOf(reply, clip_id, Kind::kVtss), clip_id, Kind::kVtss);
}

double SimilarityClient::Similarity(std::string_view clip_id,
                                    std::span<const io::Frame> frames,
                                    std::string_view caption) {
  const json reply = t_->Call({std::string(clip_id), Kind::kSimilarity, frames,
                               {{"caption", caption}}});
  return FiniteNumber(ResultOf(reply, clip_id, Kind::kSimilarity), clip_id,
                      Kind::kSimilarity);
}

purify::Attributes AttributesClient::Judge(std::string_view clip_id,
                                           std::span<const io::Frame> frames) {
  const json reply = t_->Call({std::string(clip_id), Kind::kAttributes, frames});
  const json& v = ResultOf(reply, clip_id, Kind::kAttributes);
  if (!v.is_object() || v.size() != purify::kAttributeCount) {
    Malformed(clip_id, Kind::kAttributes, "expected 16 named booleans");
  }
  purify::Attributes out{};
  for (size_t i = 0; i < purify::kAttributeCount; ++i) {
    auto it = v.find(std::string(purify::kAttributeNames[i]));
    if (it == v.end() || !it->is_boolean()) {
      Malformed(clip_id, Kind::kAttributes,
                "missing '" + std::string(purify::kAttributeNames[i]) + "'");
    }
    out[i] = it->get<bool>();
  }
  return out;
}

std::vector<std::vector<double>> EmbeddingClient::Embed(std::string_view clip_id,
                                                        std::span<const io::Frame> frames) {
  const json reply = t_->Call({std::string(clip_id), Kind::kEmbedding, frames});
  const json& v = ResultOf(reply, clip_id, Kind::kEmbedding);
  if (!v.is_array()) Malformed(clip_id, Kind::kEmbedding, "expected an array per frame");
  std::vector<std::vector<double>> out;
  for (const json& row : v) {
    if (!row.is_array() || row.empty()) Malformed(clip_id, Kind::kEmbedding, "bad vector");
    std::vector<double> vec;
    for (const json& x : row) vec.push_back(FiniteNumber(x, clip_id, Kind::kEmbedding));
    out.push_back(std::move(vec));
  }
  return out;
}

std::vector<std::vector<filters::TextBox>> TextBoxClient::Detect(
    std::string_view clip_id, std::span<const io::Frame> frames) {
  const json reply = t_->Call({std::string(clip_id), Kind::kTextBoxes, frames});
  const json& v = ResultOf(reply, clip_id, Kind::kTextBoxes);
  if (!v.is_array() || v.size() != frames.size()) {
    Malformed(clip_id, Kind::kTextBoxes, "expected one box list per frame");
  }
  std::vector<std::vector<filters::TextBox>> out;
  for (const json& list : v) {
    if (!list.is_array()) Malformed(clip_id, Kind::kTextBoxes, "box list is not an array");
    std::vector<filters::TextBox> boxes;
    for (const json& b : list) {
      try {
        boxes.push_back({b.at("x0").get<int>(), b.at("y0").get<int>(), b.at("x1").get<int>(),
                         b.at("y1").get<int>()});
      } catch (const json::exception&) {
        Malformed(clip_id, Kind::kTextBoxes, "box needs integer x0, y0, x1, y1");
      }
    }
    out.push_back(std::move(boxes));
  }
  return out;
}

std::map<std::string, std::string> CaptionClient::Describe(std::string_view clip_id,
                                                           std::span<const io::Frame> frames,
                                                           std::string_view prompt) {
  const json reply =
      t_->Call({std::string(clip_id), Kind::kCaption, frames, {{"prompt", prompt}}});
  const json& v = ResultOf(reply, clip_id, Kind::kCaption);
  if (!v.is_object()) Malformed(clip_id, Kind::kCaption, "expected named strings");
  std::map<std::string, std::string> out;
  for (const auto& [key, text] : v.items()) {
    if (!text.is_string()) Malformed(clip_id, Kind::kCaption, "'" + key + "' is not a string");
    out[key] = text.get<std::string>();
  }
  return out;
}

std::string SummaryClient::Summarize(std::string_view clip_id,
                                     const caption::StructuredCaption& captions,
                                     std::string_view prompt) {
  json fields = json::object();
  for (size_t i = 0; i < caption::kCategoryCount; ++i) {
    fields[std::string(caption::kCategoryKeys[i])] = captions.fields[i];
  }
  const json reply = t_->Call({std::string(clip_id), Kind::kSummary, {},
                               {{"prompt", prompt}, {"captions", std::move(fields)}}});
  const json& v = ResultOf(reply, clip_id, Kind::kSummary);
  if (!v.is_string()) Malformed(clip_id, Kind::kSummary, "expected a string");
  return v.get<std::string>();
}

ProviderSet::ProviderSet(const std::map<Kind, Endpoint>& endpoints, const MockContext& context) {
  std::map<std::string, std::shared_ptr<Transport>> by_url;
  auto transport = [&](const Endpoint& e) {
    auto& t = by_url[e.url];
    if (!t) t = MakeTransport(e, context);
    return t;
  };
  for (const auto& [kind, endpoint] : endpoints) {
    if (endpoint.url.empty()) continue;
    auto t = transport(endpoint);
    switch (kind) {
      case Kind::kVtss: vtss_ = std::make_unique<VtssClient>(t); break;
      case Kind::kSimilarity: similarity_ = std::make_unique<SimilarityClient>(t); break;
      case Kind::kAttributes: attributes_ = std::make_unique<AttributesClient>(t); break;
      case Kind::kEmbedding: embedding_ = std::make_unique<EmbeddingClient>(t); break;
      case Kind::kTextBoxes: text_ = std::make_unique<TextBoxClient>(t); break;
      case Kind::kCaption: caption_ = std::make_unique<CaptionClient>(t); break;
      case Kind::kSummary: summary_ = std::make_unique<SummaryClient>(t); break;
    }
  }
}

}  // namespace uvcurate::providers
