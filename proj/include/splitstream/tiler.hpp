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

// Channel <-> single-plane image rearrangement.
//
// Both modes lay the C channels over a G_r x G_c grid (G_c = ceil(sqrt(C)),
// G_r = ceil(C / G_c)), filled in ascending channel order, and produce a
// (G_r * N) x (G_c * M) image:
//
//   tiling:   channel c is a contiguous N x M block at grid cell
//             (c / G_c, c % G_c).
//   quilting: sample (i, j) of channel c lands at
//             (i * G_r + c / G_c, j * G_c + c % G_c), so each G_r x G_c
//             super-pixel holds one sample from every channel.
//
// Grid cells past C are filled with pad_value and dropped on the way back.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splitstream/qlayer.hpp"

namespace splitstream {

enum class TileMode : std::uint8_t { kTiling = 0, kQuilting = 1 };

inline const char* to_string(TileMode m) { return m == TileMode::kTiling ? "tile" : "quilt"; }

struct TileLayout {
  TileMode mode = TileMode::kTiling;
  std::size_t grid_rows = 1;
  std::size_t grid_cols = 1;
  Shape src{};
  std::uint16_t pad_value = 0;

  std::size_t height() const { return grid_rows * src.rows; }
  std::size_t width() const { return grid_cols * src.cols; }

  friend bool operator==(const TileLayout&, const TileLayout&) = default;
};

struct TileImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint16_t> samples;  // row-major
  TileLayout layout;
  QuantHeader quant_header;

  int n_bit() const { return quant_header.n_bit; }
  std::uint16_t& at(std::size_t y, std::size_t x) { return samples[y * width + x]; }
  std::uint16_t at(std::size_t y, std::size_t x) const { return samples[y * width + x]; }

  friend bool operator==(const TileImage&, const TileImage&) = default;
};

inline std::size_t ceil_sqrt(std::size_t c) {
  std::size_t g = 0;
  while (g * g < c) ++g;
  return g;
}

inline TileLayout plan_layout(std::size_t n, std::size_t m, std::size_t c, TileMode mode) {
  require(n >= 1 && m >= 1 && c >= 1, ErrorKind::kInvalidArgument, "layout dimensions must be >= 1");
  TileLayout l;
  l.mode = mode;
  l.grid_cols = ceil_sqrt(c);
  l.grid_rows = (c + l.grid_cols - 1) / l.grid_cols;
  l.src = {n, m, c};
  return l;
}

inline TileLayout plan_layout(const Shape& s, TileMode mode) { return plan_layout(s.rows, s.cols, s.channels, mode); }

/// Throws kFormat unless the grid is the minimal one for the source channel count.
inline void validate_layout(const TileLayout& l) {
  const std::size_t c = l.src.channels;
  const bool ok = l.src.rows >= 1 && l.src.cols >= 1 && c >= 1 && l.grid_rows >= 1 && l.grid_cols >= 1 &&
                  l.grid_rows * l.grid_cols >= c && l.grid_rows * l.grid_cols - c < l.grid_cols &&
                  (l.mode == TileMode::kTiling || l.mode == TileMode::kQuilting);
  if (!ok) fail(ErrorKind::kFormat, "corrupted tile layout");
}

namespace detail {

// Image position of sample (i, j) of channel c under layout l.
inline std::size_t image_offset(const TileLayout& l, std::size_t i, std::size_t j, std::size_t c) {
  const std::size_t gr = c / l.grid_cols;
  const std::size_t gc = c % l.grid_cols;
  std::size_t y, x;
  if (l.mode == TileMode::kTiling) {
    y = gr * l.src.rows + i;
    x = gc * l.src.cols + j;
  } else {
    y = i * l.grid_rows + gr;
    x = j * l.grid_cols + gc;
  }
  return y * l.width() + x;
}

inline TileImage arrange(const QuantizedTensor& q, const TileLayout& l) {
  validate_layout(l);
  if (!(q.shape == l.src)) {
    fail(ErrorKind::kShape, "layout expects " + to_string(l.src) + ", tensor is " + to_string(q.shape));
  }
  require(q.data.size() == q.shape.volume(), ErrorKind::kShape, "quantized data length != shape volume");
  TileImage img{l.height(), l.width(), std::vector<std::uint16_t>(l.height() * l.width(), l.pad_value), l,
                q.header};
  const Shape& s = l.src;
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      for (std::size_t c = 0; c < s.channels; ++c)
        img.samples[image_offset(l, i, j, c)] = q.data[(i * s.cols + j) * s.channels + c];
  return img;
}

inline QuantizedTensor disarrange(const TileImage& img) {
  const TileLayout& l = img.layout;
  validate_layout(l);
  if (img.height != l.height() || img.width != l.width() || img.samples.size() != img.height * img.width) {
    fail(ErrorKind::kFormat, "tile image dimensions disagree with its layout");
  }
  const Shape& s = l.src;
  QuantizedTensor q{s, img.quant_header, std::vector<std::uint16_t>(s.volume())};
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      for (std::size_t c = 0; c < s.channels; ++c)
        q.data[(i * s.cols + j) * s.channels + c] = img.samples[image_offset(l, i, j, c)];
  return q;
}

}  // namespace detail

inline TileImage tile(const QuantizedTensor& q, const TileLayout& layout) {
  require(layout.mode == TileMode::kTiling, ErrorKind::kInvalidArgument, "tile() needs a tiling layout");
  return detail::arrange(q, layout);
}

inline TileImage quilt(const QuantizedTensor& q, const TileLayout& layout) {
  require(layout.mode == TileMode::kQuilting, ErrorKind::kInvalidArgument, "quilt() needs a quilting layout");
  return detail::arrange(q, layout);
}

inline QuantizedTensor untile(const TileImage& img) {
  require(img.layout.mode == TileMode::kTiling, ErrorKind::kInvalidArgument, "untile() needs a tiled image");
  return detail::disarrange(img);
}

inline QuantizedTensor unquilt(const TileImage& img) {
  require(img.layout.mode == TileMode::kQuilting, ErrorKind::kInvalidArgument, "unquilt() needs a quilted image");
  return detail::disarrange(img);
}

/// Plans the layout for `q` and applies it in the requested mode.
inline TileImage to_image(const QuantizedTensor& q, TileMode mode) {
  return detail::arrange(q, plan_layout(q.shape, mode));
}

/// Inverse of to_image, dispatching on the layout's mode.
inline QuantizedTensor from_image(const TileImage& img) { return detail::disarrange(img); }

}  // namespace splitstream
