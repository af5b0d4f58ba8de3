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

#include "uvcurate/frame_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "uvcurate/error.hpp"

namespace uvcurate::io {
namespace {

constexpr std::string_view kSignature = "YUV4MPEG2";
constexpr size_t kMaxHeaderLength = 4096;

// floor((n + 500) / 1000) for any sign of n.
int RoundThousandths(int n) {
  const int shifted = n + 500;
  return shifted >= 0 ? shifted / 1000 : -((-shifted + 999) / 1000);
}

uint8_t Clamp8(int v) { return static_cast<uint8_t>(std::clamp(v, 0, 255)); }

int ParsePositiveInt(std::string_view token, ErrorCode code,
                     std::string_view what) {
  int value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || value <= 0) {
    throw Error(code, "bad " + std::string(what) + " '" + std::string(token) +
                          "'");
  }
  return value;
}

Chroma ParseChroma(std::string_view tag) {
  if (tag == "420" || tag == "420jpeg" || tag == "420paldv" ||
      tag == "420mpeg2") {
    return Chroma::k420;
  }
  if (tag == "422") return Chroma::k422;
  if (tag == "444") return Chroma::k444;
  if (tag == "mono") return Chroma::kMono;
  throw Error(ErrorCode::kUnsupportedChroma, "C" + std::string(tag));
}

void Validate(const StreamMeta& meta) {
  if (static_cast<int64_t>(meta.width) * meta.height > kMaxPixels) {
    throw Error(ErrorCode::kDimensionTooLarge,
                std::to_string(meta.width) + "x" + std::to_string(meta.height));
  }
  const bool odd_w = meta.width % 2 != 0;
  const bool odd_h = meta.height % 2 != 0;
  if ((meta.chroma == Chroma::k420 && (odd_w || odd_h)) ||
      (meta.chroma == Chroma::k422 && odd_w)) {
    throw Error(ErrorCode::kOddDimension,
                "subsampled chroma needs even dimensions");
  }
}

}  // namespace

std::string_view ChromaName(Chroma chroma) {
  switch (chroma) {
    case Chroma::k420: return "420";
    case Chroma::k422: return "422";
    case Chroma::k444: return "444";
    case Chroma::kMono: return "mono";
  }
  return "420";
}

size_t StreamMeta::FramePayloadSize() const {
  const size_t luma = static_cast<size_t>(width) * height;
  switch (chroma) {
    case Chroma::k420: return luma * 3 / 2;
    case Chroma::k422: return luma * 2;
    case Chroma::k444: return luma * 3;
    case Chroma::kMono: return luma;
  }
  return 0;
}

Frame Frame::Filled(int width, int height, Rgb color, int64_t index) {
  Frame f;
  f.index = index;
  f.width = width;
  f.height = height;
  f.rgb.resize(f.pixel_count() * 3);
  for (size_t i = 0; i < f.rgb.size(); i += 3) {
    f.rgb[i] = color.r;
    f.rgb[i + 1] = color.g;
    f.rgb[i + 2] = color.b;
  }
  return f;
}

Rgb YuvToRgb(uint8_t y, uint8_t u, uint8_t v) {
  const int c = 1164 * (static_cast<int>(y) - 16);
  const int d = static_cast<int>(u) - 128;
  const int e = static_cast<int>(v) - 128;
  return {Clamp8(RoundThousandths(c + 1596 * e)),
          Clamp8(RoundThousandths(c - 813 * e - 391 * d)),
          Clamp8(RoundThousandths(c + 2018 * d))};
}

std::vector<uint8_t> GrayPlane(const Frame& frame) {
  std::vector<uint8_t> gray(frame.pixel_count());
  const uint8_t* p = frame.rgb.data();
  for (size_t i = 0; i < gray.size(); ++i, p += 3) {
    gray[i] = GrayOf(p[0], p[1], p[2]);
  }
  return gray;
}

HeaderParse ParseY4mHeader(std::string_view text) {
  if (text.substr(0, kSignature.size()) != kSignature ||
      (text.size() > kSignature.size() && text[kSignature.size()] != ' ' &&
       text[kSignature.size()] != '\n')) {
    throw Error(ErrorCode::kMissingSignature, "stream does not start with " +
                                                  std::string(kSignature));
  }
  const size_t newline = text.find('\n');
  if (newline == std::string_view::npos) {
    throw Error(ErrorCode::kMissingSignature, "unterminated header line");
  }

  HeaderParse out;
  out.consumed = newline + 1;
  bool have_w = false, have_h = false, have_f = false;
  std::string_view rest = text.substr(kSignature.size(), newline -
                                                             kSignature.size());
  while (!rest.empty()) {
    const size_t start = rest.find_first_not_of(' ');
    if (start == std::string_view::npos) break;
    rest.remove_prefix(start);
    const size_t stop = std::min(rest.find(' '), rest.size());
    const std::string_view token = rest.substr(0, stop);
    rest.remove_prefix(stop);

    const std::string_view value = token.substr(1);
    switch (token[0]) {
      case 'W':
        out.meta.width =
            ParsePositiveInt(value, ErrorCode::kMissingDimension, "width");
        have_w = true;
        break;
      case 'H':
        out.meta.height =
            ParsePositiveInt(value, ErrorCode::kMissingDimension, "height");
        have_h = true;
        break;
      case 'F': {
        const size_t colon = value.find(':');
        if (colon == std::string_view::npos) {
          throw Error(ErrorCode::kMalformedRational,
                      "frame rate '" + std::string(value) + "'");
        }
        out.meta.fps_num = ParsePositiveInt(
            value.substr(0, colon), ErrorCode::kMalformedRational, "fps");
        out.meta.fps_den = ParsePositiveInt(
            value.substr(colon + 1), ErrorCode::kMalformedRational, "fps");
        have_f = true;
        break;
      }
      case 'C':
        out.meta.chroma = ParseChroma(value);
        break;
      default:
        // I (interlace), A (aspect), X (comment) carry nothing we use.
        break;
    }
  }
  if (!have_w || !have_h) {
    throw Error(ErrorCode::kMissingDimension, "header lacks W or H");
  }
  if (!have_f) {
    throw Error(ErrorCode::kMalformedRational, "header lacks F");
  }
  Validate(out.meta);
  return out;
}

HeaderParse ParseY4mHeader(std::span<const uint8_t> bytes) {
  return ParseY4mHeader(std::string_view(
      reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string FormatY4mHeader(const StreamMeta& meta) {
  std::ostringstream s;
  s << kSignature << " W" << meta.width << " H" << meta.height << " F"
    << meta.fps_num << ':' << meta.fps_den << " Ip A1:1 C"
    << ChromaName(meta.chroma) << '\n';
  return s.str();
}

Frame DecodeYuvPayload(const StreamMeta& meta, std::span<const uint8_t> payload,
                       int64_t index) {
  if (payload.size() != meta.FramePayloadSize()) {
    throw Error(ErrorCode::kTruncatedFrame,
                "payload " + std::to_string(payload.size()) + " bytes, want " +
                    std::to_string(meta.FramePayloadSize()));
  }
  Frame f;
  f.index = index;
  f.width = meta.width;
  f.height = meta.height;
  const size_t n = f.pixel_count();
  f.rgb.resize(n * 3);
  const uint8_t* y_plane = payload.data();
  f.luma.emplace(y_plane, y_plane + n);

  if (meta.chroma == Chroma::kMono) {
    for (size_t i = 0; i < n; ++i) {
      f.rgb[3 * i] = f.rgb[3 * i + 1] = f.rgb[3 * i + 2] = y_plane[i];
    }
    return f;
  }

  int shift_x = 0, shift_y = 0;
  if (meta.chroma == Chroma::k420) shift_x = shift_y = 1;
  if (meta.chroma == Chroma::k422) shift_x = 1;
  const size_t cw = static_cast<size_t>(meta.width) >> shift_x;
  const size_t ch = static_cast<size_t>(meta.height) >> shift_y;
  const uint8_t* u_plane = y_plane + n;
  const uint8_t* v_plane = u_plane + cw * ch;

  uint8_t* out = f.rgb.data();
  for (int y = 0; y < meta.height; ++y) {
    const size_t crow = static_cast<size_t>(y >> shift_y) * cw;
    for (int x = 0; x < meta.width; ++x) {
      const size_t ci = crow + (static_cast<size_t>(x) >> shift_x);
      const Rgb c = YuvToRgb(*y_plane++, u_plane[ci], v_plane[ci]);
      *out++ = c.r;
      *out++ = c.g;
      *out++ = c.b;
    }
  }
  return f;
}

// ---------------------------------------------------------------- Y4mReader

Y4mReader::Y4mReader(std::unique_ptr<std::istream> in) : in_(std::move(in)) {
  std::string line;
  char c = 0;
  while (line.size() < kMaxHeaderLength && in_->get(c)) {
    line.push_back(c);
    if (c == '\n') break;
  }
  meta_ = ParseY4mHeader(line).meta;
  payload_.resize(meta_.FramePayloadSize());
}

std::unique_ptr<Y4mReader> Y4mReader::Open(const std::filesystem::path& path) {
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return std::make_unique<Y4mReader>(std::move(in));
}

bool Y4mReader::ReadMarkerAndPayload() {
  std::string marker;
  char c = 0;
  while (marker.size() < kMaxHeaderLength && in_->get(c)) {
    marker.push_back(c);
    if (c == '\n') break;
  }
  if (marker.empty()) return false;
  if (marker.back() != '\n' || marker.rfind("FRAME", 0) != 0 ||
      (marker.size() > 6 && marker[5] != ' ')) {
    throw Error(ErrorCode::kBadFrameMarker,
                "frame " + std::to_string(next_index_));
  }
  in_->read(reinterpret_cast<char*>(payload_.data()),
            static_cast<std::streamsize>(payload_.size()));
  if (static_cast<size_t>(in_->gcount()) != payload_.size()) {
    throw Error(ErrorCode::kTruncatedFrame,
                "frame " + std::to_string(next_index_) + " has " +
                    std::to_string(in_->gcount()) + " of " +
                    std::to_string(payload_.size()) + " bytes");
  }
  return true;
}

std::optional<Frame> Y4mReader::NextFrame() {
  if (!ReadMarkerAndPayload()) return std::nullopt;
  return DecodeYuvPayload(meta_, payload_, next_index_++);
}

bool Y4mReader::SkipFrame() {
  if (!ReadMarkerAndPayload()) return false;
  ++next_index_;
  return true;
}

Y4mWriter::Y4mWriter(std::ostream& out, const StreamMeta& meta)
    : out_(out), meta_(meta) {
  Validate(meta_);
  out_ << FormatY4mHeader(meta_);
}

void Y4mWriter::WritePlanar(std::span<const uint8_t> payload) {
  if (payload.size() != meta_.FramePayloadSize()) {
    throw Error(ErrorCode::kInvalidArgument, "planar payload size mismatch");
  }
  out_ << "FRAME\n";
  out_.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size()));
}

// ---------------------------------------------------------------------- PNM

namespace {

class PnmCursor {
 public:
  explicit PnmCursor(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  int NextInt() {
    SkipSpaceAndComments();
    int value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_++] - '0');
      any = true;
      if (value > 1 << 20) break;
    }
    if (!any) throw Error(ErrorCode::kMalformedImage, "expected integer");
    return value;
  }

  // Exactly one whitespace byte separates maxval from raster data.
  size_t RasterOffset() {
    if (pos_ >= bytes_.size()) {
      throw Error(ErrorCode::kMalformedImage, "missing raster");
    }
    return pos_ + 1;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      const uint8_t c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 2;
};

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

Frame ReadPnm(std::span<const uint8_t> bytes, int64_t index) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw Error(ErrorCode::kMalformedImage, "not a binary P5/P6 image");
  }
  const bool color = bytes[1] == '6';
  PnmCursor cursor(bytes);
  Frame f;
  f.index = index;
  f.width = cursor.NextInt();
  f.height = cursor.NextInt();
  const int maxval = cursor.NextInt();
  if (f.width <= 0 || f.height <= 0) {
    throw Error(ErrorCode::kMalformedImage, "zero dimension");
  }
  if (static_cast<int64_t>(f.width) * f.height > kMaxPixels) {
    throw Error(ErrorCode::kDimensionTooLarge, "image too large");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kMalformedImage,
                "maxval " + std::to_string(maxval) + " (only 255 supported)");
  }
  const size_t offset = cursor.RasterOffset();
  const size_t n = f.pixel_count();
  const size_t need = color ? n * 3 : n;
  if (bytes.size() < offset + need) {
    throw Error(ErrorCode::kTruncatedFrame, "raster shorter than header says");
  }
  const uint8_t* raster = bytes.data() + offset;
  if (color) {
    f.rgb.assign(raster, raster + need);
  } else {
    f.rgb.resize(n * 3);
    for (size_t i = 0; i < n; ++i) {
      f.rgb[3 * i] = f.rgb[3 * i + 1] = f.rgb[3 * i + 2] = raster[i];
    }
    f.luma.emplace(raster, raster + n);
  }
  return f;
}

Frame ReadPnmFile(const std::filesystem::path& path, int64_t index) {
  const auto bytes = ReadFileBytes(path);
  return ReadPnm(bytes, index);
}

std::vector<uint8_t> EncodePpm(const Frame& frame) {
  const std::string header = "P6\n" + std::to_string(frame.width) + " " +
                             std::to_string(frame.height) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.rgb.begin(), frame.rgb.end());
  return out;
}

PnmSequenceReader::PnmSequenceReader(std::filesystem::path dir, int fps_num,
                                     int fps_den)
    : dir_(std::move(dir)) {
  bool found = false;
  for (const char* ext : {".ppm", ".pgm"}) {
    for (int64_t first : {0, 1}) {
      extension_ = ext;
      first_number_ = first;
      found = std::filesystem::exists(PathFor(first));
      if (found) break;
    }
    if (found) break;
  }
  if (!found) {
    throw Error(ErrorCode::kIoError,
                "no frame_000000/000001 .ppm or .pgm in " + dir_.string());
  }
  const Frame first = ReadPnmFile(PathFor(first_number_), 0);
  meta_.width = first.width;
  meta_.height = first.height;
  meta_.fps_num = fps_num;
  meta_.fps_den = fps_den;
  meta_.chroma = extension_ == ".ppm" ? Chroma::k444 : Chroma::kMono;
  int64_t count = 0;
  while (std::filesystem::exists(PathFor(first_number_ + count))) ++count;
  meta_.frame_count = count;
}

std::filesystem::path PnmSequenceReader::PathFor(int64_t number) const {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%06lld%s",
                static_cast<long long>(number), extension_.c_str());
  return dir_ / name;
}

bool PnmSequenceReader::LooksLikeSequence(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) return false;
  for (const char* name : {"frame_000000.ppm", "frame_000001.ppm",
                           "frame_000000.pgm", "frame_000001.pgm"}) {
    if (std::filesystem::exists(dir / name)) return true;
  }
  return false;
}

std::optional<Frame> PnmSequenceReader::NextFrame() {
  if (next_index_ >= *meta_.frame_count) return std::nullopt;
  Frame f = ReadPnmFile(PathFor(first_number_ + next_index_), next_index_);
  if (f.width != meta_.width || f.height != meta_.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frame " + std::to_string(next_index_) +
                    " differs in size from the first frame");
  }
  ++next_index_;
  return f;
}

bool PnmSequenceReader::SkipFrame() {
  if (next_index_ >= *meta_.frame_count) return false;
  ++next_index_;
  return true;
}

std::unique_ptr<FrameSource> OpenSource(const std::filesystem::path& path,
                                        int default_fps_num,
                                        int default_fps_den) {
  if (std::filesystem::is_directory(path)) {
    return std::make_unique<PnmSequenceReader>(path, default_fps_num,
                                               default_fps_den);
  }
  return Y4mReader::Open(path);
}

std::vector<Frame> ReadRange(FrameSource& source, int64_t start, int64_t end) {
  for (int64_t i = 0; i < start; ++i) {
    if (!source.SkipFrame()) {
      throw Error(ErrorCode::kTruncatedFrame,
                  "stream ended before frame " + std::to_string(start));
    }
  }
  std::vector<Frame> frames;
  frames.reserve(static_cast<size_t>(std::max<int64_t>(0, end - start)));
  for (int64_t i = start; i < end; ++i) {
    auto f = source.NextFrame();
    if (!f) {
      throw Error(ErrorCode::kTruncatedFrame,
                  "stream ended before frame " + std::to_string(i));
    }
    frames.push_back(std::move(*f));
  }
  return frames;
}

}  // namespace uvcurate::io
