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

#include "uvcurate/manifest_store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "uvcurate/error.hpp"

namespace uvcurate::manifest {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kStatusNames = {
    "ingested", "split", "filtered", "purified", "captioned", "rejected",
    "deferred"};

[[noreturn]] void Schema(const std::string& msg) {
  throw Error(ErrorCode::kSchemaViolation, msg);
}

[[noreturn]] void Io(const std::filesystem::path& path, const std::string& what) {
  throw Error(ErrorCode::kIoError,
              what + " " + path.string() + ": " + std::strerror(errno));
}

bool IsStage(Status s) { return s != Status::kRejected && s != Status::kDeferred; }

io::Chroma ParseChroma(std::string_view name) {
  for (io::Chroma c : {io::Chroma::k420, io::Chroma::k422, io::Chroma::k444,
                       io::Chroma::kMono}) {
    if (io::ChromaName(c) == name) return c;
  }
  Schema("unknown chroma '" + std::string(name) + "'");
}

// Typed field access. Missing keys and wrong types are schema violations.
const json& Field(const json& j, const char* key) {
  if (!j.is_object()) Schema(std::string("expected object around '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) Schema(std::string("missing '") + key + "'");
  return *it;
}

template <typename T>
T Get(const json& j, const char* key) {
  const json& v = Field(j, key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) Schema(std::string("'") + key + "' must be boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) Schema(std::string("'") + key + "' must be an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) Schema(std::string("'") + key + "' must be a number");
  } else {
    if (!v.is_string()) Schema(std::string("'") + key + "' must be a string");
  }
  return v.get<T>();
}

void OnlyKeys(const json& j, std::initializer_list<std::string_view> allowed,
              std::string_view what) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok |= (a == k);
    if (!ok) Schema("unknown key '" + k + "' in " + std::string(what));
  }
}

std::vector<std::string> StringList(const json& j, const char* key) {
  const json& v = Field(j, key);
  if (!v.is_array()) Schema(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const json& s : v) {
    if (!s.is_string()) Schema(std::string("'") + key + "' holds a non-string");
    out.push_back(s.get<std::string>());
  }
  return out;
}

json StreamToJson(const StreamSummary& s) {
  return {{"width", s.width},
          {"height", s.height},
          {"fps_num", s.fps_num},
          {"fps_den", s.fps_den},
          {"chroma", io::ChromaName(s.chroma)},
          {"frame_count", s.frame_count}};
}

StreamSummary StreamFromJson(const json& j) {
  OnlyKeys(j, {"width", "height", "fps_num", "fps_den", "chroma", "frame_count"},
           "stream");
  StreamSummary s;
  s.width = Get<int>(j, "width");
  s.height = Get<int>(j, "height");
  s.fps_num = Get<int>(j, "fps_num");
  s.fps_den = Get<int>(j, "fps_den");
  s.chroma = ParseChroma(Get<std::string>(j, "chroma"));
  s.frame_count = Get<int64_t>(j, "frame_count");
  return s;
}

json CutsToJson(const split::CutList& c) {
  return {{"cuts", c.cuts}, {"n_frames", c.n_frames}};
}

split::CutList CutsFromJson(const json& j) {
  OnlyKeys(j, {"cuts", "n_frames"}, "cuts");
  split::CutList c;
  c.n_frames = Get<int64_t>(j, "n_frames");
  const json& arr = Field(j, "cuts");
  if (!arr.is_array()) Schema("'cuts' must be an array");
  for (const json& v : arr) {
    if (!v.is_number_integer()) Schema("cut index must be an integer");
    c.cuts.push_back(v.get<int64_t>());
  }
  return c;
}

json ClipToJson(const clips::ClipRecord& c) {
  return {{"id", c.id},           {"source_id", c.source_id},
          {"start_frame", c.start_frame}, {"end_frame", c.end_frame},
          {"fps_num", c.fps_num}, {"fps_den", c.fps_den},
          {"width", c.width},     {"height", c.height},
          {"set", clips::ClipSetName(c.set)}};
}

clips::ClipRecord ClipFromJson(const json& j) {
  OnlyKeys(j, {"id", "source_id", "start_frame", "end_frame", "fps_num",
               "fps_den", "width", "height", "set"},
           "clip");
  clips::ClipRecord c;
  c.id = Get<std::string>(j, "id");
  c.source_id = Get<std::string>(j, "source_id");
  c.start_frame = Get<int64_t>(j, "start_frame");
  c.end_frame = Get<int64_t>(j, "end_frame");
  c.fps_num = Get<int>(j, "fps_num");
  c.fps_den = Get<int>(j, "fps_den");
  c.width = Get<int>(j, "width");
  c.height = Get<int>(j, "height");
  c.set = clips::ParseClipSet(Get<std::string>(j, "set"));
  return c;
}

json FiltersToJson(const filters::FilterReport& r) {
  json out = json::object();
  for (filters::Filter f : filters::kAllFilters) {
    const auto& res = r[f];
    json runs = json::array();
    for (auto [s, n] : filters::EncodeRuns(res.flags)) runs.push_back({s, n});
    out[std::string(filters::FilterName(f))] = {
        {"flagged", res.verdict.flagged}, {"total", res.verdict.total},
        {"ratio", res.verdict.ratio},     {"pass", res.verdict.pass},
        {"runs", std::move(runs)}};
  }
  return out;
}

filters::FilterReport FiltersFromJson(const json& j) {
  OnlyKeys(j, {"text", "border", "exposure", "graying"}, "filters");
  filters::FilterReport r;
  for (filters::Filter f : filters::kAllFilters) {
    const std::string name(filters::FilterName(f));
    const json& o = Field(j, name.c_str());
    OnlyKeys(o, {"flagged", "total", "ratio", "pass", "runs"}, name);
    auto& res = r[f];
    res.verdict.flagged = Get<int64_t>(o, "flagged");
    res.verdict.total = Get<int64_t>(o, "total");
    res.verdict.ratio = Get<double>(o, "ratio");
    res.verdict.pass = Get<bool>(o, "pass");
    const json& runs = Field(o, "runs");
    if (!runs.is_array()) Schema("'runs' must be an array");
    std::vector<std::pair<int64_t, int64_t>> pairs;
    int64_t flagged = 0;
    for (const json& p : runs) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
          !p[1].is_number_integer()) {
        Schema("run must be [start, length]");
      }
      const int64_t s = p[0].get<int64_t>(), n = p[1].get<int64_t>();
      if (s < 0 || n <= 0 || s + n > res.verdict.total) {
        Schema(name + " run outside the clip");
      }
      pairs.emplace_back(s, n);
      flagged += n;
    }
    if (flagged != res.verdict.flagged) Schema(name + " runs disagree with 'flagged'");
    res.flags = filters::DecodeRuns(pairs, res.verdict.total);
  }
  return r;
}

json ScoresToJson(const purify::ScoreSet& s) {
  json out = json::object();
  if (s.vtss) out["vtss"] = *s.vtss;
  if (s.motion) out["motion"] = *s.motion;
  if (s.caption_sim) out["caption_sim"] = *s.caption_sim;
  if (s.attributes) {
    json a = json::object();
    for (size_t i = 0; i < purify::kAttributeCount; ++i) {
      a[std::string(purify::kAttributeNames[i])] = (*s.attributes)[i];
    }
    out["attributes"] = std::move(a);
  }
  return out;
}

purify::ScoreSet ScoresFromJson(const json& j) {
  OnlyKeys(j, {"vtss", "motion", "caption_sim", "attributes"}, "scores");
  purify::ScoreSet s;
  if (j.contains("vtss")) s.vtss = Get<double>(j, "vtss");
  if (j.contains("motion")) s.motion = Get<double>(j, "motion");
  if (j.contains("caption_sim")) s.caption_sim = Get<double>(j, "caption_sim");
  if (j.contains("attributes")) {
    const json& a = j["attributes"];
    if (!a.is_object() || a.size() != purify::kAttributeCount) {
      Schema("'attributes' must hold all 16 judgments");
    }
    purify::Attributes attrs{};
    for (size_t i = 0; i < purify::kAttributeCount; ++i) {
      attrs[i] = Get<bool>(a, std::string(purify::kAttributeNames[i]).c_str());
    }
    s.attributes = attrs;
  }
  return s;
}

json CaptionsToJson(const caption::StructuredCaption& c) {
  json out = json::object();
  for (size_t i = 0; i < caption::kCategoryCount; ++i) {
    out[std::string(caption::kCategoryKeys[i])] = c.fields[i];
  }
  out["summarized"] = c.summarized;
  return out;
}

caption::StructuredCaption CaptionsFromJson(const json& j) {
  if (!j.is_object() || j.size() != caption::kCategoryCount + 1) {
    Schema("'captions' must hold the nine categories and 'summarized'");
  }
  caption::StructuredCaption c;
  for (size_t i = 0; i < caption::kCategoryCount; ++i) {
    c.fields[i] = Get<std::string>(j, std::string(caption::kCategoryKeys[i]).c_str());
  }
  c.summarized = Get<std::string>(j, "summarized");
  return c;
}

void RequireFinite(const json& j) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    Schema("non-finite number");
  }
  if (j.is_structured()) {
    for (const json& v : j) RequireFinite(v);
  }
}

// Splits on '\n'; a final segment without newline is kept.
template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  size_t pos = 0;
  int64_t line_no = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    const size_t end = nl == std::string_view::npos ? text.size() : nl;
    fn(++line_no, static_cast<int64_t>(pos), text.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Io(path, "cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) Io(path, "cannot read");
  return ss.str();
}

}  // namespace

std::string_view StatusName(Status s) { return kStatusNames[static_cast<size_t>(s)]; }

Status ParseStatus(std::string_view name) {
  for (size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == name) return static_cast<Status>(i);
  }
  Schema("unknown status '" + std::string(name) + "'");
}

std::string_view RoleName(Role r) { return r == Role::kSource ? "source" : "clip"; }

Status ManifestEntry::progress() const {
  return status == Status::kDeferred && deferred_at ? *deferred_at : status;
}

void ManifestEntry::Validate() const {
  if (schema_version != kSchemaVersion) {
    Schema("schema_version " + std::to_string(schema_version) + " is not supported");
  }
  if (id.empty()) Schema("empty id");
  if (status == Status::kRejected && reject_reasons.empty()) {
    Schema(id + ": rejected without reasons");
  }
  if (status != Status::kRejected && !reject_reasons.empty()) {
    Schema(id + ": reasons on an entry that is not rejected");
  }
  if ((status == Status::kDeferred) != deferred_at.has_value()) {
    Schema(id + ": deferred_at must be set exactly when deferred");
  }
  if (deferred_at && !IsStage(*deferred_at)) Schema(id + ": bad deferred_at");
  if (!defer_reason.empty() && status != Status::kDeferred) {
    Schema(id + ": defer_reason on an entry that is not deferred");
  }
  if (role == Role::kClip) {
    if (!clip) Schema(id + ": clip entry without a clip record");
    if (clip->id != id) Schema(id + ": clip record id '" + clip->id + "' differs");
    if (clip->start_frame < 0 || clip->end_frame <= clip->start_frame) {
      Schema(id + ": empty frame range");
    }
    if (clip->fps_num <= 0 || clip->fps_den <= 0) Schema(id + ": bad frame rate");
  } else {
    if (clip) Schema(id + ": source entry carries a clip record");
    if (!stream) Schema(id + ": source entry without stream summary");
  }
  if (filters) {
    for (const auto& r : filters->results) {
      if (static_cast<int64_t>(r.flags.size()) != r.verdict.total) {
        Schema(id + ": filter bitmap size differs from total");
      }
    }
  }
}

bool TransitionAllowed(const ManifestEntry& from, const ManifestEntry& to) {
  if (from.role != to.role) return false;
  if (from.status == Status::kRejected) return false;
  if (to.status == Status::kRejected) return true;
  return static_cast<int>(to.progress()) >= static_cast<int>(from.progress());
}

json ToJson(const ManifestEntry& e) {
  json j = json::object();
  j["schema_version"] = e.schema_version;
  j["id"] = e.id;
  j["role"] = RoleName(e.role);
  j["status"] = StatusName(e.status);
  if (e.deferred_at) j["deferred_at"] = StatusName(*e.deferred_at);
  if (!e.defer_reason.empty()) j["defer_reason"] = e.defer_reason;
  if (!e.source_path.empty()) j["source_path"] = e.source_path;
  if (e.stream) j["stream"] = StreamToJson(*e.stream);
  if (e.cuts) j["cuts"] = CutsToJson(*e.cuts);
  if (e.clip) j["clip"] = ClipToJson(*e.clip);
  if (e.dissolve) {
    j["dissolve"] = {{"similarity", e.dissolve->similarity},
                     {"flagged", e.dissolve->flagged}};
  }
  if (e.filters) j["filters"] = FiltersToJson(*e.filters);
  if (e.scores) j["scores"] = ScoresToJson(*e.scores);
  if (e.captions) j["captions"] = CaptionsToJson(*e.captions);
  j["reject_reasons"] = e.reject_reasons;
  j["theme_tags"] = e.theme_tags;
  return j;
}

ManifestEntry FromJson(const json& j) {
  if (!j.is_object()) Schema("entry must be an object");
  OnlyKeys(j,
           {"schema_version", "id", "role", "status", "deferred_at",
            "defer_reason", "source_path", "stream", "cuts", "clip", "dissolve",
            "filters", "scores", "captions", "reject_reasons", "theme_tags"},
           "entry");
  ManifestEntry e;
  e.schema_version = Get<int>(j, "schema_version");
  e.id = Get<std::string>(j, "id");
  const std::string role = Get<std::string>(j, "role");
  if (role == "source") {
    e.role = Role::kSource;
  } else if (role == "clip") {
    e.role = Role::kClip;
  } else {
    Schema("unknown role '" + role + "'");
  }
  e.status = ParseStatus(Get<std::string>(j, "status"));
  if (j.contains("deferred_at")) e.deferred_at = ParseStatus(Get<std::string>(j, "deferred_at"));
  if (j.contains("defer_reason")) e.defer_reason = Get<std::string>(j, "defer_reason");
  if (j.contains("source_path")) e.source_path = Get<std::string>(j, "source_path");
  if (j.contains("stream")) e.stream = StreamFromJson(j["stream"]);
  if (j.contains("cuts")) e.cuts = CutsFromJson(j["cuts"]);
  if (j.contains("clip")) e.clip = ClipFromJson(j["clip"]);
  if (j.contains("dissolve")) {
    const json& d = j["dissolve"];
    OnlyKeys(d, {"similarity", "flagged"}, "dissolve");
    e.dissolve = split::DissolveResult{Get<double>(d, "similarity"),
                                       Get<bool>(d, "flagged")};
  }
  if (j.contains("filters")) e.filters = FiltersFromJson(j["filters"]);
  if (j.contains("scores")) e.scores = ScoresFromJson(j["scores"]);
  if (j.contains("captions")) e.captions = CaptionsFromJson(j["captions"]);
  e.reject_reasons = StringList(j, "reject_reasons");
  e.theme_tags = StringList(j, "theme_tags");
  return e;
}

std::string Canonical(const ManifestEntry& e) {
  const json j = ToJson(e);
  RequireFinite(j);
  try {
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::type_error& err) {
    Schema(e.id + ": " + err.what());
  }
}

ReadResult ParseManifest(std::string_view text) {
  ReadResult out;
  ForEachLine(text, [&](int64_t line_no, int64_t offset, std::string_view line) {
    const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      out.errors.push_back({line_no, "not valid JSON"});
      return;
    }
    try {
      ManifestEntry e = FromJson(j);
      e.Validate();
      out.entries.push_back(std::move(e));
      out.offsets.push_back(offset);
    } catch (const Error& err) {
      out.errors.push_back({line_no, err.what()});
    } catch (const json::exception& err) {
      out.errors.push_back({line_no, err.what()});
    }
  });
  return out;
}

ReadResult ReadAll(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return {};
  return ParseManifest(Slurp(path));
}

std::map<std::string, ManifestEntry> LatestById(
    const std::vector<ManifestEntry>& entries) {
  std::map<std::string, ManifestEntry> out;
  for (const auto& e : entries) out.insert_or_assign(e.id, e);
  return out;
}

// ----------------------------------------------------------------- writer

ManifestWriter::ManifestWriter(std::filesystem::path path) : path_(std::move(path)) {
  ReadResult existing = ReadAll(path_);
  load_errors_ = std::move(existing.errors);
  for (size_t i = 0; i < existing.entries.size(); ++i) {
    offsets_[existing.entries[i].id] = existing.offsets[i];
    state_.insert_or_assign(existing.entries[i].id, std::move(existing.entries[i]));
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) Io(path_, "cannot open");
  struct stat st {};
  if (::fstat(fd_, &st) != 0) Io(path_, "cannot stat");
  size_ = st.st_size;
  if (size_ > 0) {
    // A torn last line must not swallow the next record.
    char last = 0;
    const int rfd = ::open(path_.c_str(), O_RDONLY | O_CLOEXEC);
    if (rfd >= 0) {
      if (::pread(rfd, &last, 1, size_ - 1) != 1) last = '\n';
      ::close(rfd);
    }
    if (last != '\n') {
      if (::write(fd_, "\n", 1) != 1) Io(path_, "cannot write");
      ++size_;
    }
  }
}

ManifestWriter::~ManifestWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void ManifestWriter::Append(const ManifestEntry& entry) {
  entry.Validate();
  std::string line = Canonical(entry);
  line.push_back('\n');

  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = state_.find(entry.id); it != state_.end()) {
    if (!TransitionAllowed(it->second, entry)) {
      Schema(entry.id + ": cannot move from " +
             std::string(StatusName(it->second.status)) + " to " +
             std::string(StatusName(entry.status)));
    }
  }
  size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      Io(path_, "cannot append to");
    }
    done += static_cast<size_t>(n);
  }
  offsets_[entry.id] = size_;
  size_ += static_cast<int64_t>(line.size());
  state_.insert_or_assign(entry.id, entry);
}

// ------------------------------------------------------------------ index

std::map<std::string, int64_t> BuildIndex(const std::filesystem::path& manifest) {
  ReadResult r = ReadAll(manifest);
  std::map<std::string, int64_t> out;
  for (size_t i = 0; i < r.entries.size(); ++i) out[r.entries[i].id] = r.offsets[i];
  return out;
}

void WriteIndex(const std::filesystem::path& idx,
                const std::map<std::string, int64_t>& offsets) {
  const std::filesystem::path tmp = idx.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Io(tmp, "cannot create");
    out << json(offsets).dump() << '\n';
    if (!out) Io(tmp, "cannot write");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, idx, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::map<std::string, int64_t> ReadIndex(const std::filesystem::path& idx) {
  const json j = json::parse(Slurp(idx), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kIoError, idx.string() + " is not an index file");
  }
  std::map<std::string, int64_t> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_integer()) throw Error(ErrorCode::kIoError, "bad offset for " + k);
    out[k] = v.get<int64_t>();
  }
  return out;
}

ManifestEntry ReadEntryAt(const std::filesystem::path& manifest, int64_t offset) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) Io(manifest, "cannot open");
  in.seekg(offset);
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kIoError, "no line at offset " + std::to_string(offset));
  }
  const json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) Schema("line at offset " + std::to_string(offset) + " is not JSON");
  ManifestEntry e = FromJson(j);
  e.Validate();
  return e;
}

// ------------------------------------------------------------------ stats

std::string_view ResolutionClassName(ResolutionClass r) {
  switch (r) {
    case ResolutionClass::k8K: return "8K";
    case ResolutionClass::k4K: return "4K";
    case ResolutionClass::kOther: return "other";
  }
  return "other";
}

std::string_view FpsBucketName(FpsBucket b) {
  switch (b) {
    case FpsBucket::kUpTo30: return "<=30";
    case FpsBucket::kMid: return "(30,50)";
    case FpsBucket::kFrom50: return ">=50";
  }
  return "<=30";
}

ResolutionClass ClassifyResolution(int width) {
  if (width >= 7680) return ResolutionClass::k8K;
  if (width >= 3840) return ResolutionClass::k4K;
  return ResolutionClass::kOther;
}

FpsBucket ClassifyFps(int fps_num, int fps_den) {
  const int64_t num = fps_num, den = fps_den;
  if (num <= 30 * den) return FpsBucket::kUpTo30;
  if (num >= 50 * den) return FpsBucket::kFrom50;
  return FpsBucket::kMid;
}

int64_t StatsReport::BucketTotal() const {
  int64_t sum = 0;
  for (const auto& [set, by_res] : buckets) {
    for (const auto& [res, by_fps] : by_res) {
      for (const auto& [fps, n] : by_fps) sum += n;
    }
  }
  return sum;
}

namespace {

constexpr std::array<ResolutionClass, 3> kResolutions = {
    ResolutionClass::k8K, ResolutionClass::k4K, ResolutionClass::kOther};
constexpr std::array<FpsBucket, 3> kFpsBuckets = {
    FpsBucket::kUpTo30, FpsBucket::kMid, FpsBucket::kFrom50};

std::vector<std::string> CaptionFieldKeys() {
  std::vector<std::string> keys;
  for (auto k : caption::kCategoryKeys) keys.emplace_back(k);
  keys.emplace_back("summarized");
  return keys;
}

void AddSet(StatsReport& r, const std::string& set) {
  auto& by_res = r.buckets[set];
  for (auto res : kResolutions) {
    for (auto fps : kFpsBuckets) {
      by_res[std::string(ResolutionClassName(res))].try_emplace(
          std::string(FpsBucketName(fps)), 0);
    }
  }
}

}  // namespace

StatsReport ComputeStats(const std::vector<ManifestEntry>& entries) {
  StatsReport r;
  AddSet(r, "short");
  AddSet(r, "long");
  const std::vector<std::string> keys = CaptionFieldKeys();
  for (const auto& k : keys) r.caption_words[k];

  for (const auto& [id, e] : LatestById(entries)) {
    if (e.role != Role::kClip || !e.clip) continue;
    ++r.total_entries;
    ++r.status_counts[std::string(StatusName(e.status))];
    if (e.status == Status::kRejected) {
      ++r.rejected;
      for (const auto& reason : e.reject_reasons) ++r.reject_reasons[reason];
      continue;
    }
    if (e.status == Status::kDeferred) ++r.deferred;

    const std::string set(clips::ClipSetName(e.clip->set));
    if (!r.buckets.count(set)) AddSet(r, set);
    ++r.buckets[set][std::string(ResolutionClassName(ClassifyResolution(e.clip->width)))]
                [std::string(FpsBucketName(ClassifyFps(e.clip->fps_num, e.clip->fps_den)))];

    for (const auto& t : e.theme_tags) ++r.themes[t];

    for (size_t i = 0; i < keys.size(); ++i) {
      WordHistogram& h = r.caption_words[keys[i]];
      const std::string* text = nullptr;
      if (e.captions) {
        text = i < caption::kCategoryCount ? &e.captions->fields[i]
                                           : &e.captions->summarized;
      }
      if (!text || text->empty()) {
        ++h.missing;
        continue;
      }
      const int64_t words = caption::WordCount(*text);
      ++h.bins[words / kWordBinWidth * kWordBinWidth];
      h.total_words += words;
      ++h.counted;
    }
  }
  return r;
}

json StatsToJson(const StatsReport& r) {
  json words = json::object();
  for (const auto& [field, h] : r.caption_words) {
    json bins = json::object();
    for (auto [start, n] : h.bins) bins[std::to_string(start)] = n;
    words[field] = {{"bins", std::move(bins)},
                    {"bin_width", kWordBinWidth},
                    {"missing", h.missing},
                    {"counted", h.counted},
                    {"total_words", h.total_words},
                    {"mean_words", h.counted ? double(h.total_words) / h.counted : 0.0}};
  }
  return {{"total_entries", r.total_entries},
          {"rejected", r.rejected},
          {"deferred", r.deferred},
          {"bucket_total", r.BucketTotal()},
          {"buckets", r.buckets},
          {"caption_categories", caption::kReportedCategoryCount},
          {"caption_words", std::move(words)},
          {"reject_reasons", r.reject_reasons},
          {"themes", r.themes},
          {"status_counts", r.status_counts}};
}

std::string FormatStats(const StatsReport& r) {
  std::ostringstream out;
  out << "clips " << r.total_entries << "  kept " << r.total_entries - r.rejected
      << "  rejected " << r.rejected << "  deferred " << r.deferred << "\n\n";

  out << std::left << std::setw(8) << "set" << std::setw(8) << "res";
  for (auto fps : kFpsBuckets) out << std::right << std::setw(9) << FpsBucketName(fps);
  out << std::setw(9) << "total" << '\n';
  for (const auto& [set, by_res] : r.buckets) {
    for (auto res : kResolutions) {
      const auto& row = by_res.at(std::string(ResolutionClassName(res)));
      int64_t sum = 0;
      out << std::left << std::setw(8) << set << std::setw(8) << ResolutionClassName(res);
      for (auto fps : kFpsBuckets) {
        const int64_t n = row.at(std::string(FpsBucketName(fps)));
        sum += n;
        out << std::right << std::setw(9) << n;
      }
      out << std::setw(9) << sum << '\n';
    }
  }

  out << "\ncaption words (" << caption::kReportedCategoryCount << " fields)\n";
  for (const auto& key : CaptionFieldKeys()) {
    const WordHistogram& h = r.caption_words.at(key);
    out << "  " << std::left << std::setw(17) << key << std::right << std::fixed
        << std::setprecision(1) << std::setw(8)
        << (h.counted ? double(h.total_words) / h.counted : 0.0) << " mean  "
        << std::setw(6) << h.counted << " captioned  " << std::setw(6) << h.missing
        << " missing\n";
  }
  if (!r.reject_reasons.empty()) {
    out << "\nrejections\n";
    for (const auto& [reason, n] : r.reject_reasons) {
      out << "  " << std::left << std::setw(28) << reason << std::right << n << '\n';
    }
  }
  if (!r.themes.empty()) {
    out << "\nthemes\n";
    for (const auto& [theme, n] : r.themes) {
      out << "  " << std::left << std::setw(28) << theme << std::right << n << '\n';
    }
  }
  return out.str();
}

}  // namespace uvcurate::manifest
