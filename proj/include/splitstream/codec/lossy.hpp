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

// QP-controlled block-DCT intra coder.
//
// 16x16 blocks in raster order; edge blocks are completed by replicating the
// last row/column. Per block: subtract 2^(n_bit-1), orthonormal 2-D DCT-II,
// uniform quantization by qstep(qp) = 2^((qp - 4) / 6) with a flat matrix.
//
// Block syntax:
//   se(dc - previous_dc)                     previous_dc starts at 0
//   { ue(run + 1) ue(|level| - 1) sign }*    AC in zigzag order, run = zeros skipped
//   ue(0)                                    end of block
// ue/se are order-0 exp-Golomb codes (se via zigzag folding).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "splitstream/codec/bit_io.hpp"
#include "splitstream/codec/bitstream.hpp"
#include "splitstream/codec/dct.hpp"

namespace splitstream::codec {

inline constexpr int kLossyBlock = 16;

inline double qstep(int qp) { return std::exp2((qp - 4) / 6.0); }

namespace detail {

using LossyBlock = Block<kLossyBlock>;

inline void put_level(BitWriter& out, std::int64_t level) {
  const std::uint64_t mag = static_cast<std::uint64_t>(level < 0 ? -level : level);
  out.put_exp_golomb(static_cast<std::uint32_t>(mag - 1), 0);
  out.put_bit(level < 0 ? 1u : 0u);
}

inline std::int64_t get_level(BitReader& in) {
  const std::int64_t mag = std::int64_t{in.get_exp_golomb(0)} + 1;
  return in.get_bit() ? -mag : mag;
}

}  // namespace detail

inline Bitstream encode_lossy(const TileImage& img, int qp) {
  if (qp < 0 || qp > kMaxQp) fail(ErrorKind::kInvalidArgument, "qp " + std::to_string(qp) + " outside [0, 51]");
  detail::check_image(img);
  constexpr int B = kLossyBlock;
  const std::size_t h = img.height, w = img.width;
  const double mid = static_cast<double>(1 << (img.n_bit() - 1));
  const double step = qstep(qp);
  const auto& scan = zigzag_order<B>();

  BitWriter out;
  std::int64_t prev_dc = 0;
  std::array<std::int64_t, B * B> q{};
  for (std::size_t by = 0; by < h; by += B) {
    for (std::size_t bx = 0; bx < w; bx += B) {
      detail::LossyBlock blk{};
      for (int r = 0; r < B; ++r) {
        const std::size_t y = std::min(h - 1, by + r);
        for (int c = 0; c < B; ++c) {
          const std::size_t x = std::min(w - 1, bx + c);
          blk[r * B + c] = img.samples[y * w + x] - mid;
        }
      }
      const auto coef = forward_dct<B>(blk);
      for (int i = 0; i < B * B; ++i) q[i] = static_cast<std::int64_t>(round_half_away(coef[i] / step));

      const std::int64_t dc = q[0];
      out.put_exp_golomb(zigzag_fold(static_cast<std::int32_t>(dc - prev_dc)), 0);
      prev_dc = dc;
      std::uint32_t run = 0;
      for (int i = 1; i < B * B; ++i) {
        const std::int64_t level = q[scan[i]];
        if (level == 0) {
          ++run;
          continue;
        }
        out.put_exp_golomb(run + 1, 0);
        detail::put_level(out, level);
        run = 0;
      }
      out.put_exp_golomb(0, 0);
    }
  }

  Bitstream bs;
  bs.mode = CodecMode::kLossy;
  bs.n_bit = img.n_bit();
  bs.qp = qp;
  bs.quant_header = img.quant_header;
  bs.layout = img.layout;
  bs.payload = out.finish();
  return bs;
}

inline TileImage decode_lossy(const Bitstream& bs) {
  require(bs.mode == CodecMode::kLossy, ErrorKind::kInvalidArgument, "bitstream is not lossy");
  require(bs.qp >= 0 && bs.qp <= kMaxQp, ErrorKind::kFormat, "qp outside [0, 51]");
  require(is_supported_bit_depth(bs.n_bit), ErrorKind::kFormat, "unsupported bit depth");
  validate_layout(bs.layout);
  constexpr int B = kLossyBlock;
  const std::size_t h = bs.layout.height(), w = bs.layout.width();
  const double mid = static_cast<double>(1 << (bs.n_bit - 1));
  const double top = max_level(bs.n_bit);
  const double step = qstep(bs.qp);
  const auto& scan = zigzag_order<B>();

  TileImage img{h, w, std::vector<std::uint16_t>(h * w, 0), bs.layout, bs.quant_header};
  img.quant_header.n_bit = bs.n_bit;
  BitReader in(bs.payload);
  std::int64_t prev_dc = 0;
  for (std::size_t by = 0; by < h; by += B) {
    for (std::size_t bx = 0; bx < w; bx += B) {
      detail::LossyBlock coef{};
      prev_dc += zigzag_unfold(in.get_exp_golomb(0));
      coef[0] = static_cast<double>(prev_dc) * step;
      int pos = 0;
      for (;;) {
        const std::uint32_t sym = in.get_exp_golomb(0);
        if (sym == 0) break;
        pos += static_cast<int>(sym);
        if (pos >= B * B) fail(ErrorKind::kCodec, "AC run past end of block");
        coef[scan[pos]] = static_cast<double>(detail::get_level(in)) * step;
      }
      const auto pix = inverse_dct<B>(coef);
      for (int r = 0; r < B && by + r < h; ++r) {
        for (int c = 0; c < B && bx + c < w; ++c) {
          const double v = std::clamp(std::round(pix[r * B + c] + mid), 0.0, top);
          img.samples[(by + r) * w + bx + c] = static_cast<std::uint16_t>(v);
        }
      }
    }
  }
  in.expect_end();
  return img;
}

}  // namespace splitstream::codec
