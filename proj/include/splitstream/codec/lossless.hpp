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

// Predictive lossless coder.
//
// Every sample is predicted with the median edge detector from its left (a),
// above (b) and above-left (c) neighbours; the residual is zigzag-folded and
// written as an order-k exp-Golomb code. The image is walked in 16x16 blocks
// (raster order over blocks, raster order inside a block). Each block starts
// with one flag bit: 0 means every residual in the block is zero and nothing
// else follows, 1 is followed by the block's k in 3 bits and its residuals.
// k is picked per block by trying all eight orders.
//
// Block order only changes the order symbols are emitted in; all causal
// neighbours of a sample are already decoded when it is reached.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

#include "splitstream/codec/bit_io.hpp"
#include "splitstream/codec/bitstream.hpp"

namespace splitstream::codec {

inline constexpr int kLosslessBlock = 16;
inline constexpr int kMaxGolombOrder = 7;

inline std::int32_t med_predict(std::int32_t a, std::int32_t b, std::int32_t c) {
  const std::int32_t lo = std::min(a, b);
  const std::int32_t hi = std::max(a, b);
  if (c >= hi) return lo;
  if (c <= lo) return hi;
  return a + b - c;
}

namespace detail {

// MED prediction at (y, x) from already-known samples of `img` (row-major,
// `width` wide). Missing neighbours on the top row and left column collapse
// the predictor to left / above respectively; the first sample is predicted
// as mid-level.
inline std::int32_t predict_at(const std::vector<std::uint16_t>& img, std::size_t width, std::size_t y,
                               std::size_t x, int n_bit) {
  if (y == 0 && x == 0) return std::int32_t{1} << (n_bit - 1);
  if (y == 0) return img[x - 1];
  if (x == 0) return img[(y - 1) * width];
  const std::int32_t a = img[y * width + x - 1];
  const std::int32_t b = img[(y - 1) * width + x];
  const std::int32_t c = img[(y - 1) * width + x - 1];
  return med_predict(a, b, c);
}

}  // namespace detail

inline Bitstream encode_lossless(const TileImage& img) {
  detail::check_image(img);
  const std::size_t h = img.height, w = img.width;
  BitWriter out;
  std::vector<std::uint32_t> folded;
  folded.reserve(kLosslessBlock * kLosslessBlock);

  for (std::size_t by = 0; by < h; by += kLosslessBlock) {
    for (std::size_t bx = 0; bx < w; bx += kLosslessBlock) {
      const std::size_t y1 = std::min(h, by + kLosslessBlock);
      const std::size_t x1 = std::min(w, bx + kLosslessBlock);
      folded.clear();
      bool all_zero = true;
      for (std::size_t y = by; y < y1; ++y) {
        for (std::size_t x = bx; x < x1; ++x) {
          const std::int32_t e = std::int32_t{img.samples[y * w + x]} - detail::predict_at(img.samples, w, y, x, img.n_bit());
          folded.push_back(zigzag_fold(e));
          all_zero = all_zero && e == 0;
        }
      }
      if (all_zero) {
        out.put_bit(0);
        continue;
      }
      std::array<std::size_t, kMaxGolombOrder + 1> cost{};
      for (int k = 0; k <= kMaxGolombOrder; ++k)
        for (auto u : folded) cost[k] += exp_golomb_length(u, k);
      const int k = static_cast<int>(std::min_element(cost.begin(), cost.end()) - cost.begin());
      out.put_bit(1);
      out.put(static_cast<std::uint64_t>(k), 3);
      for (auto u : folded) out.put_exp_golomb(u, k);
    }
  }

  Bitstream bs;
  bs.mode = CodecMode::kLossless;
  bs.n_bit = img.n_bit();
  bs.qp = kLosslessQp;
  bs.quant_header = img.quant_header;
  bs.layout = img.layout;
  bs.payload = out.finish();
  return bs;
}

inline TileImage decode_lossless(const Bitstream& bs) {
  require(bs.mode == CodecMode::kLossless, ErrorKind::kInvalidArgument, "bitstream is not lossless");
  require(is_supported_bit_depth(bs.n_bit), ErrorKind::kFormat, "unsupported bit depth");
  validate_layout(bs.layout);
  const std::size_t h = bs.layout.height(), w = bs.layout.width();
  const std::int32_t top = static_cast<std::int32_t>(max_level(bs.n_bit));

  TileImage img{h, w, std::vector<std::uint16_t>(h * w, 0), bs.layout, bs.quant_header};
  img.quant_header.n_bit = bs.n_bit;
  BitReader in(bs.payload);

  for (std::size_t by = 0; by < h; by += kLosslessBlock) {
    for (std::size_t bx = 0; bx < w; bx += kLosslessBlock) {
      const std::size_t y1 = std::min(h, by + kLosslessBlock);
      const std::size_t x1 = std::min(w, bx + kLosslessBlock);
      const bool coded = in.get_bit() != 0;
      const int k = coded ? static_cast<int>(in.get(3)) : 0;
      for (std::size_t y = by; y < y1; ++y) {
        for (std::size_t x = bx; x < x1; ++x) {
          const std::int32_t e = coded ? zigzag_unfold(in.get_exp_golomb(k)) : 0;
          const std::int64_t v = std::int64_t{detail::predict_at(img.samples, w, y, x, bs.n_bit)} + e;
          if (v < 0 || v > top) {
            fail(ErrorKind::kRange, "reconstructed sample " + std::to_string(v) + " at (" + std::to_string(y) +
                                        "," + std::to_string(x) + ") outside " + std::to_string(bs.n_bit) +
                                        "-bit range");
          }
          img.samples[y * w + x] = static_cast<std::uint16_t>(v);
        }
      }
    }
  }
  in.expect_end();
  return img;
}

}  // namespace splitstream::codec
