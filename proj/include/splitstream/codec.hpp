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

#pragma once

#include "splitstream/codec/bitstream.hpp"
#include "splitstream/codec/lossless.hpp"
#include "splitstream/codec/lossy.hpp"

namespace splitstream {

using codec::Bitstream;
using codec::CodecMode;

/// How a feature tensor is turned into a DFCC bitstream.
struct CompressOptions {
  CodecMode mode = CodecMode::kLossless;
  int n_bit = 8;
  int qp = 0;  // lossy only
  TileMode tiling = TileMode::kTiling;
};

inline Bitstream encode_image(const TileImage& img, CodecMode mode, int qp) {
  return mode == CodecMode::kLossless ? codec::encode_lossless(img) : codec::encode_lossy(img, qp);
}

inline TileImage decode_image(const Bitstream& bs) {
  return bs.mode == CodecMode::kLossless ? codec::decode_lossless(bs) : codec::decode_lossy(bs);
}

/// Q-layer, channel arrangement and entropy coding in one step.
template <typename T>
Bitstream compress(const Tensor<T>& v, const CompressOptions& opt) {
  return encode_image(to_image(quantize(v, opt.n_bit), opt.tiling), opt.mode, opt.qp);
}

/// Inverse of compress: decode, rearrange back to channels, inverse Q-layer.
inline FeatureTensor decompress(const Bitstream& bs) { return dequantize(from_image(decode_image(bs))); }

}  // namespace splitstream
