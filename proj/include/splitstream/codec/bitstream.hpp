// Copyright 2026 The splitstream Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The DFCC container. Fixed 40-byte little-endian header followed by the
// entropy-coded payload:
//
//   offset  size  field
//        0     4  magic "DFCC"
//        4     1  version (1)
//        5     1  n_bit (8, 10, 12)
//        6     1  qp (0..51), 0xFF marks lossless mode
//        7    17  layout: mode u8, G_r u16, G_c u16, N u32, M u32, C u32
//       24     8  quant header: vmin f32, vmax f32
//       32     4  payload length
//       36     4  CRC-32 (IEEE) of the payload
//       40     n  payload

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/crc.hpp>

#include "splitstream/byte_io.hpp"
#include "splitstream/tiler.hpp"

namespace splitstream::codec {

enum class CodecMode : std::uint8_t { kLossless = 0, kLossy = 1 };

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 40;
inline constexpr std::size_t kLayoutBytes = 17;
inline constexpr std::uint8_t kLosslessQp = 0xFF;
inline constexpr int kMaxQp = 51;

struct Bitstream {
  CodecMode mode = CodecMode::kLossless;
  int n_bit = 8;
  int qp = kLosslessQp;  // meaningful only in lossy mode
  QuantHeader quant_header;
  TileLayout layout;
  std::vector<std::uint8_t> payload;

  /// Bytes on the wire: container header plus payload.
  std::size_t total_bytes() const { return kContainerHeaderBytes + payload.size(); }

  friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

inline std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

inline void write_layout(ByteWriter& w, const TileLayout& l) {
  w.u8(static_cast<std::uint8_t>(l.mode));
  w.u16(static_cast<std::uint16_t>(l.grid_rows));
  w.u16(static_cast<std::uint16_t>(l.grid_cols));
  w.u32(static_cast<std::uint32_t>(l.src.rows));
  w.u32(static_cast<std::uint32_t>(l.src.cols));
  w.u32(static_cast<std::uint32_t>(l.src.channels));
}

inline TileLayout read_layout(ByteReader& r) {
  TileLayout l;
  const auto mode = r.u8();
  if (mode > 1) fail(ErrorKind::kFormat, "unknown tile mode " + std::to_string(mode));
  l.mode = static_cast<TileMode>(mode);
  l.grid_rows = r.u16();
  l.grid_cols = r.u16();
  l.src.rows = r.u32();
  l.src.cols = r.u32();
  l.src.channels = r.u32();
  validate_layout(l);
  return l;
}

inline std::vector<std::uint8_t> pack(const Bitstream& bs) {
  require(is_supported_bit_depth(bs.n_bit), ErrorKind::kInvalidArgument, "unsupported bit depth");
  const bool lossy = bs.mode == CodecMode::kLossy;
  require(!lossy || (bs.qp >= 0 && bs.qp <= kMaxQp), ErrorKind::kInvalidArgument, "qp out of range");
  validate_layout(bs.layout);
  require(bs.layout.grid_rows <= 0xFFFF && bs.layout.grid_cols <= 0xFFFF, ErrorKind::kInvalidArgument,
          "tile grid too large for container");

  ByteWriter w;
  w.buffer().reserve(bs.total_bytes());
  w.tag("DFCC");
  w.u8(kContainerVersion);
  w.u8(static_cast<std::uint8_t>(bs.n_bit));
  w.u8(lossy ? static_cast<std::uint8_t>(bs.qp) : kLosslessQp);
  write_layout(w, bs.layout);
  w.f32(bs.quant_header.vmin);
  w.f32(bs.quant_header.vmax);
  w.u32(static_cast<std::uint32_t>(bs.payload.size()));
  w.u32(crc32(bs.payload));
  w.bytes(bs.payload);
  return w.take();
}

inline Bitstream unpack(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || !r.tag("DFCC")) fail(ErrorKind::kFormat, "bad DFCC magic");
  const auto version = r.u8();
  if (version != kContainerVersion) fail(ErrorKind::kFormat, "unsupported DFCC version " + std::to_string(version));

  Bitstream bs;
  bs.n_bit = r.u8();
  if (!is_supported_bit_depth(bs.n_bit)) fail(ErrorKind::kFormat, "bad bit depth " + std::to_string(bs.n_bit));
  const auto qp = r.u8();
  if (qp == kLosslessQp) {
    bs.mode = CodecMode::kLossless;
    bs.qp = kLosslessQp;
  } else if (qp <= kMaxQp) {
    bs.mode = CodecMode::kLossy;
    bs.qp = qp;
  } else {
    fail(ErrorKind::kFormat, "bad qp " + std::to_string(qp));
  }
  bs.layout = read_layout(r);
  bs.quant_header.vmin = r.f32();
  bs.quant_header.vmax = r.f32();
  bs.quant_header.n_bit = bs.n_bit;
  if (!(bs.quant_header.vmin <= bs.quant_header.vmax)) fail(ErrorKind::kFormat, "quant header min > max");
  const std::uint32_t length = r.u32();
  const std::uint32_t crc = r.u32();
  auto payload = r.bytes(length);
  if (r.remaining() != 0) fail(ErrorKind::kFormat, "trailing bytes after DFCC payload");
  if (crc32(payload) != crc) fail(ErrorKind::kIntegrity, "payload CRC mismatch");
  bs.payload.assign(payload.begin(), payload.end());
  return bs;
}

namespace detail {

inline void check_image(const TileImage& img) {
  require(is_supported_bit_depth(img.n_bit()), ErrorKind::kInvalidArgument, "unsupported bit depth");
  require(img.height >= 1 && img.width >= 1 && img.samples.size() == img.height * img.width, ErrorKind::kShape,
          "tile image sample count != height*width");
  const std::uint32_t top = max_level(img.n_bit());
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    if (img.samples[i] > top) {
      fail(ErrorKind::kRange, "sample " + std::to_string(img.samples[i]) + " at " + std::to_string(i) +
                                  " exceeds " + std::to_string(img.n_bit()) + "-bit range");
    }
  }
}

}  // namespace detail

}  // namespace splitstream::codec
