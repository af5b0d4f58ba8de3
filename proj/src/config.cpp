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

#include "uvcurate/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "toml.hpp"
#include "uvcurate/error.hpp"

namespace uvcurate::config {

namespace {

[[noreturn]] void Fail(const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); }

// Reads the keys of one table and remembers which were seen, so anything
// left over can be reported.
class Section {
 public:
  Section(const toml::table& table, std::string path) : table_(table), path_(std::move(path)) {}

  void Get(std::string_view key, double& out) {
    const toml::node* n = Find(key);
    if (!n) return;
    if (auto v = n->as_floating_point()) {
      out = v->get();
    } else if (auto i = n->as_integer()) {
      out = static_cast<double>(i->get());
    } else {
      Fail(Name(key) + " must be a number");
    }
    if (!std::isfinite(out)) Fail(Name(key) + " must be finite");
  }

  void Get(std::string_view key, int& out) {
    const int64_t v = Integer(key, out);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      Fail(Name(key) + " is out of range");
    }
    out = static_cast<int>(v);
  }

  void Get(std::string_view key, uint64_t& out) {
    const toml::node* n = Find(key);
    if (!n) return;
    auto v = n->as_integer();
    if (!v || v->get() < 0) Fail(Name(key) + " must be a non-negative integer");
    out = static_cast<uint64_t>(v->get());
  }

  void Get(std::string_view key, bool& out) {
    const toml::node* n = Find(key);
    if (!n) return;
    auto v = n->as_boolean();
    if (!v) Fail(Name(key) + " must be true or false");
    out = v->get();
  }

  void Get(std::string_view key, std::string& out) {
    const toml::node* n = Find(key);
    if (!n) return;
    auto v = n->as_string();
    if (!v) Fail(Name(key) + " must be a string");
    out = v->get();
  }

  /// Sub-table, or nullptr when absent.
  const toml::table* Table(std::string_view key) {
    const toml::node* n = Find(key);
    if (!n) return nullptr;
    auto t = n->as_table();
    if (!t) Fail(Name(key) + " must be a table");
    return t;
  }

  std::string Name(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  void Done() const {
    for (const auto& [key, node] : table_) {
      if (!seen_.count(std::string(key.str()))) Fail("unknown key '" + Name(key.str()) + "'");
    }
  }

 private:
  const toml::node* Find(std::string_view key) {
    seen_.insert(std::string(key));
    return table_.get(key);
  }

  int64_t Integer(std::string_view key, int64_t fallback) {
    const toml::node* n = Find(key);
    if (!n) return fallback;
    auto v = n->as_integer();
    if (!v) Fail(Name(key) + " must be an integer");
    return v->get();
  }

  const toml::table& table_;
  std::string path_;
  std::set<std::string> seen_;
};

// Shortest text that reads back as the same double, always with a decimal
// point so TOML keeps it a float.
std::string FormatDouble(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string Quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (u < 0x20 || u == 0x7f) {
      char esc[8];
      std::snprintf(esc, sizeof(esc), "\\u%04x", u);
      out += esc;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string_view AnchorName(clips::SideAnchor a) {
  return a == clips::SideAnchor::kEdges ? "edges" : "quarter_centers";
}

}  // namespace

PipelineConfig::PipelineConfig() {
  for (providers::Kind k : providers::kAllKinds) providers[k] = {};
}

void PipelineConfig::Validate() const {
  split.Validate();
  filters.Validate();
  purify.Validate();
  if (seed > static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) {
    Fail("seed must fit in a signed 64-bit integer");
  }
  if (workers < 1 || workers > 1024) Fail("workers must lie in [1, 1024]");
  if (model_frames < 1) Fail("purify.model_frames must be >= 1");
  if (caption_frames < 1) Fail("caption.frames must be >= 1");
  if (subclip_frames < 1) Fail("sample.subclip_frames must be >= 1");
  for (const auto& [kind, e] : providers) {
    const std::string name = "providers." + std::string(providers::KindName(kind));
    if (e.timeout_ms < 1) Fail(name + ".timeout_ms must be >= 1");
    if (e.max_retries < 0) Fail(name + ".max_retries must be >= 0");
    if (e.max_inflight < 1 || e.max_inflight > 4096) {
      Fail(name + ".max_inflight must lie in [1, 4096]");
    }
    if (e.backoff_ms < 0) Fail(name + ".backoff_ms must be >= 0");
  }
}

PipelineConfig ParseConfig(std::string_view text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ": " << e.description();
    Fail(msg.str());
  }

  PipelineConfig c;
  Section top(root, "");
  top.Get("seed", c.seed);
  top.Get("workers", c.workers);

  if (const toml::table* t = top.Table("split")) {
    Section s(*t, "split");
    s.Get("adaptive_threshold", c.split.adaptive_threshold);
    s.Get("min_content_score", c.split.min_content_score);
    s.Get("window_radius", c.split.window_radius);
    s.Get("min_scene_len", c.split.min_scene_len);
    s.Get("dissolve_sim_threshold", c.split.dissolve_sim_threshold);
    std::string anchor(AnchorName(c.side_anchor));
    s.Get("side_anchor", anchor);
    if (anchor == "edges") {
      c.side_anchor = clips::SideAnchor::kEdges;
    } else if (anchor == "quarter_centers") {
      c.side_anchor = clips::SideAnchor::kQuarterCenters;
    } else {
      Fail("split.side_anchor must be \"edges\" or \"quarter_centers\"");
    }
    s.Done();
  }

  if (const toml::table* t = top.Table("filters")) {
    Section s(*t, "filters");
    auto& f = c.filters;
    s.Get("text_area_ratio", f.text_area_ratio);
    s.Get("bad_frame_ratio", f.bad_frame_ratio);
    s.Get("border_depth_ratio", f.border_depth_ratio);
    s.Get("border_mean_max", f.border_mean_max);
    s.Get("exposure_low", f.exposure_low);
    s.Get("exposure_high", f.exposure_high);
    s.Get("exposure_pixel_ratio", f.exposure_pixel_ratio);
    s.Get("gray_variance_min", f.gray_variance_min);
    s.Get("variance_bessel", f.variance_bessel);
    s.Get("border_per_side", f.border_per_side);
    s.Get("text_sample_interval", f.text_sample_interval);
    s.Done();
  }

  if (const toml::table* t = top.Table("purify")) {
    Section s(*t, "purify");
    auto& p = c.purify;
    s.Get("vtss_min", p.vtss_min);
    s.Get("motion_min", p.motion_min);
    s.Get("motion_max", p.motion_max);
    s.Get("caption_sim_min", p.caption_sim_min);
    s.Get("flow_sample_interval", p.flow_sample_interval);
    s.Get("flow_downscale", p.flow_downscale);
    s.Get("model_frames", c.model_frames);
    s.Done();
  }

  if (const toml::table* t = top.Table("caption")) {
    Section s(*t, "caption");
    s.Get("frames", c.caption_frames);
    s.Get("label_categories", c.label_categories);
    s.Done();
  }

  if (const toml::table* t = top.Table("sample")) {
    Section s(*t, "sample");
    s.Get("subclip_frames", c.subclip_frames);
    s.Done();
  }

  if (const toml::table* t = top.Table("providers")) {
    Section s(*t, "providers");
    s.Get("mock_truth", c.mock_truth);
    for (providers::Kind k : providers::kAllKinds) {
      const std::string_view name = providers::KindName(k);
      const toml::table* pt = s.Table(name);
      if (!pt) continue;
      Section ps(*pt, s.Name(name));
      auto& e = c.providers[k];
      ps.Get("url", e.url);
      ps.Get("timeout_ms", e.timeout_ms);
      ps.Get("max_retries", e.max_retries);
      ps.Get("max_inflight", e.max_inflight);
      ps.Get("backoff_ms", e.backoff_ms);
      ps.Done();
    }
    s.Done();
  }
  top.Done();

  c.Validate();
  return c;
}

PipelineConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path.string());
}

std::string DumpConfig(const PipelineConfig& c) {
  std::ostringstream o;
  auto num = [&](std::string_view key, double v) { o << key << " = " << FormatDouble(v) << "\n"; };
  auto integer = [&](std::string_view key, int64_t v) { o << key << " = " << v << "\n"; };
  auto boolean = [&](std::string_view key, bool v) {
    o << key << " = " << (v ? "true" : "false") << "\n";
  };
  auto str = [&](std::string_view key, std::string_view v) {
    o << key << " = " << Quote(v) << "\n";
  };

  integer("seed", static_cast<int64_t>(c.seed));
  integer("workers", c.workers);

  o << "\n[split]\n";
  num("adaptive_threshold", c.split.adaptive_threshold);
  num("min_content_score", c.split.min_content_score);
  integer("window_radius", c.split.window_radius);
  integer("min_scene_len", c.split.min_scene_len);
  num("dissolve_sim_threshold", c.split.dissolve_sim_threshold);
  str("side_anchor", AnchorName(c.side_anchor));

  o << "\n[filters]\n";
  const auto& f = c.filters;
  num("text_area_ratio", f.text_area_ratio);
  num("bad_frame_ratio", f.bad_frame_ratio);
  num("border_depth_ratio", f.border_depth_ratio);
  num("border_mean_max", f.border_mean_max);
  integer("exposure_low", f.exposure_low);
  integer("exposure_high", f.exposure_high);
  num("exposure_pixel_ratio", f.exposure_pixel_ratio);
  num("gray_variance_min", f.gray_variance_min);
  boolean("variance_bessel", f.variance_bessel);
  boolean("border_per_side", f.border_per_side);
  integer("text_sample_interval", f.text_sample_interval);

  o << "\n[purify]\n";
  const auto& p = c.purify;
  num("vtss_min", p.vtss_min);
  num("motion_min", p.motion_min);
  num("motion_max", p.motion_max);
  num("caption_sim_min", p.caption_sim_min);
  integer("flow_sample_interval", p.flow_sample_interval);
  integer("flow_downscale", p.flow_downscale);
  integer("model_frames", c.model_frames);

  o << "\n[caption]\n";
  integer("frames", c.caption_frames);
  boolean("label_categories", c.label_categories);

  o << "\n[sample]\n";
  integer("subclip_frames", c.subclip_frames);

  o << "\n[providers]\n";
  str("mock_truth", c.mock_truth);
  for (const auto& [kind, e] : c.providers) {
    o << "\n[providers." << providers::KindName(kind) << "]\n";
    str("url", e.url);
    integer("timeout_ms", e.timeout_ms);
    integer("max_retries", e.max_retries);
    integer("max_inflight", e.max_inflight);
    integer("backoff_ms", e.backoff_ms);
  }
  return o.str();
}

}  // namespace uvcurate::config
