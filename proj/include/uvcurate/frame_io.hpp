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

// Raw video stream parsing. Two input formats are understood: YUV4MPEG2
// (8-bit planar, 4:2:0 / 4:2:2 / 4:4:4 / mono) and numbered binary PPM/PGM
// sequences (frame_%06d.ppm). Both decode into the same interleaved RGB
// Frame. The YUV path is integer-only so a given byte stream produces the
// same RGB buffer on every platform.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uvcurate::io {

enum class Chroma { k420, k422, k444, kMono };

std::string_view ChromaName(Chroma chroma);

inline constexpr int64_t kMaxPixels = int64_t{8192} * 4320;

struct StreamMeta {
  int width = 0;
  int height = 0;
  int fps_num = 0;
  int fps_den = 1;
  Chroma chroma = Chroma::k420;
  std::optional<int64_t> frame_count;

  double fps() const { return static_cast<double>(fps_num) / fps_den; }

  /// Bytes of planar payload carried by one FRAME record.
  size_t FramePayloadSize() const;

  bool operator==(const StreamMeta&) const = default;
};

struct Rgb {
  uint8_t r = 0;
  uint8_t g = 0;
  uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

/// One decoded frame. Immutable once produced; safe to share across threads.
struct Frame {
  int64_t index = 0;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgb;                 // width * height * 3, row-major
  std::optional<std::vector<uint8_t>> luma;  // raw Y plane when decoded from YUV

  size_t pixel_count() const {
    return static_cast<size_t>(width) * static_cast<size_t>(height);
  }
  Rgb at(int x, int y) const {
    const size_t o = (static_cast<size_t>(y) * width + x) * 3;
    return {rgb[o], rgb[o + 1], rgb[o + 2]};
  }

  static Frame Filled(int width, int height, Rgb color, int64_t index = 0);

  bool operator==(const Frame&) const = default;
};

/// Limited-range BT.601 YCbCr to RGB, rounded half up and clamped.
Rgb YuvToRgb(uint8_t y, uint8_t u, uint8_t v);

/// BT.601 luma weights applied to full-range RGB: round(0.299R+0.587G+0.114B).
inline uint8_t GrayOf(uint8_t r, uint8_t g, uint8_t b) {
  return static_cast<uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

std::vector<uint8_t> GrayPlane(const Frame& frame);

struct HeaderParse {
  StreamMeta meta;
  size_t consumed = 0;  // bytes through and including the terminating '\n'
};

HeaderParse ParseY4mHeader(std::span<const uint8_t> bytes);
HeaderParse ParseY4mHeader(std::string_view text);

/// Inverse of ParseY4mHeader for the fields StreamMeta carries.
std::string FormatY4mHeader(const StreamMeta& meta);

/// Converts one planar payload (exactly meta.FramePayloadSize() bytes).
Frame DecodeYuvPayload(const StreamMeta& meta, std::span<const uint8_t> payload,
                       int64_t index);

/// Sequential frame producer. Single consumer.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual const StreamMeta& meta() const = 0;
  /// Returns std::nullopt at end of stream.
  virtual std::optional<Frame> NextFrame() = 0;
  /// Advances past one frame without colour conversion; false at end.
  virtual bool SkipFrame() = 0;
};

class Y4mReader final : public FrameSource {
 public:
  explicit Y4mReader(std::unique_ptr<std::istream> in);
  static std::unique_ptr<Y4mReader> Open(const std::filesystem::path& path);

  const StreamMeta& meta() const override { return meta_; }
  std::optional<Frame> NextFrame() override;
  bool SkipFrame() override;

 private:
  bool ReadMarkerAndPayload();

  std::unique_ptr<std::istream> in_;
  StreamMeta meta_;
  std::vector<uint8_t> payload_;
  int64_t next_index_ = 0;
};

class Y4mWriter {
 public:
  Y4mWriter(std::ostream& out, const StreamMeta& meta);

  /// Writes one FRAME record from an already planar payload.
  void WritePlanar(std::span<const uint8_t> payload);

 private:
  std::ostream& out_;
  StreamMeta meta_;
};

/// Reads P6 (RGB) or P5 (gray) binary images with maxval 255.
Frame ReadPnm(std::span<const uint8_t> bytes, int64_t index);
Frame ReadPnmFile(const std::filesystem::path& path, int64_t index);
std::vector<uint8_t> EncodePpm(const Frame& frame);

/// Directory of frame_%06d.ppm or frame_%06d.pgm, numbered from 0 or 1.
class PnmSequenceReader final : public FrameSource {
 public:
  PnmSequenceReader(std::filesystem::path dir, int fps_num, int fps_den);

  const StreamMeta& meta() const override { return meta_; }
  std::optional<Frame> NextFrame() override;
  bool SkipFrame() override;

  static bool LooksLikeSequence(const std::filesystem::path& dir);

 private:
  std::filesystem::path PathFor(int64_t number) const;

  std::filesystem::path dir_;
  std::string extension_;
  int64_t first_number_ = 0;
  int64_t next_index_ = 0;
  StreamMeta meta_;
};

/// Opens a .y4m file or a PNM sequence directory.
std::unique_ptr<FrameSource> OpenSource(const std::filesystem::path& path,
                                        int default_fps_num = 30,
                                        int default_fps_den = 1);

/// Decodes frames [start, end) of a source.
std::vector<Frame> ReadRange(FrameSource& source, int64_t start, int64_t end);

}  // namespace uvcurate::io
