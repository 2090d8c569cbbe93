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

// Split execution: front layers, a byte-counted transfer, back layers.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splitstream/codec.hpp"
#include "splitstream/splitnet/network.hpp"

namespace splitstream::splitnet {

enum class TransferMode : std::uint8_t {
  kFloat32 = 0,            // raw f32 tensor (FTEN bytes)
  kQuantizedLossless = 1,  // Q-layer + lossless codec
  kLossy = 2,              // Q-layer + block-DCT codec at a QP
};

inline const char* to_string(TransferMode m) {
  switch (m) {
    case TransferMode::kFloat32: return "float";
    case TransferMode::kQuantizedLossless: return "lossless";
    case TransferMode::kLossy: return "lossy";
  }
  return "?";
}

struct SplitPlan {
  std::size_t split_index = 0;  // transfer after this layer; 0 uploads the input
  TransferMode mode = TransferMode::kFloat32;
  int n_bit = 8;
  int qp = 0;
  TileMode tiling = TileMode::kTiling;

  static SplitPlan float32(std::size_t split) { return {split, TransferMode::kFloat32}; }
  static SplitPlan lossless(std::size_t split, int n_bit = 8, TileMode t = TileMode::kTiling) {
    return {split, TransferMode::kQuantizedLossless, n_bit, 0, t};
  }
  static SplitPlan lossy(std::size_t split, int qp, int n_bit = 8, TileMode t = TileMode::kTiling) {
    return {split, TransferMode::kLossy, n_bit, qp, t};
  }
};

inline std::string describe(const SplitPlan& p) {
  std::string s = std::string(to_string(p.mode)) + "@" + std::to_string(p.split_index);
  if (p.mode != TransferMode::kFloat32) s += "/" + std::to_string(p.n_bit) + "bit/" + to_string(p.tiling);
  if (p.mode == TransferMode::kLossy) s += "/qp" + std::to_string(p.qp);
  return s;
}

struct Transfer {
  std::vector<std::uint8_t> wire;      // exactly what crosses the boundary
  std::optional<Bitstream> bitstream;  // set for the two codec modes
  std::size_t total_bytes() const { return wire.size(); }
};

/// Encodes the boundary tensor per `plan`, then decodes it from the wire
/// bytes as the receiving side would. Returns the reconstruction.
template <typename T>
Tensor<T> send_through(const Tensor<T>& features, const SplitPlan& plan, Transfer* transfer = nullptr) {
  Transfer t;
  Tensor<T> received;
  if (plan.mode == TransferMode::kFloat32) {
    t.wire = encode_tensor(features.template cast<float>());
    received = decode_tensor(t.wire).template cast<T>();
  } else {
    CompressOptions opt;
    opt.mode = plan.mode == TransferMode::kLossy ? CodecMode::kLossy : CodecMode::kLossless;
    opt.n_bit = plan.n_bit;
    opt.qp = plan.qp;
    opt.tiling = plan.tiling;
    t.bitstream = compress(features, opt);
    t.wire = codec::pack(*t.bitstream);
    received = decompress(codec::unpack(t.wire)).template cast<T>();
  }
  if (transfer) *transfer = std::move(t);
  return received;
}

struct SplitResult {
  Tensor<float> output;
  Transfer transfer;
  Tensor<float> sent;      // boundary features before transfer
  Tensor<float> received;  // boundary features after transfer
};

inline void check_plan(const Network& net, const SplitPlan& plan) {
  require(plan.split_index <= net.size(), ErrorKind::kInvalidArgument, "split index past the last layer");
  if (plan.mode != TransferMode::kFloat32) {
    require(is_supported_bit_depth(plan.n_bit), ErrorKind::kInvalidArgument, "unsupported bit depth");
  }
  if (plan.mode == TransferMode::kLossy) {
    require(plan.qp >= 0 && plan.qp <= codec::kMaxQp, ErrorKind::kInvalidArgument, "qp outside [0, 51]");
  }
}

/// 32-bit inference split after layer plan.split_index.
inline SplitResult forward_split(const Network& net, const FeatureTensor& input, const SplitPlan& plan) {
  check_plan(net, plan);
  if (!(input.shape() == net.input)) {
    fail(ErrorKind::kShape, "input is " + to_string(input.shape()) + ", network expects " + to_string(net.input));
  }
  SplitResult r;
  FeatureTensor x = input;
  for (std::size_t i = 0; i < plan.split_index; ++i) x = forward_layer(net.layers[i], x);
  r.sent = x;
  r.received = send_through(x, plan, &r.transfer);
  x = r.received;
  for (std::size_t i = plan.split_index; i < net.size(); ++i) x = forward_layer(net.layers[i], x);
  r.output = std::move(x);
  return r;
}

}  // namespace splitstream::splitnet
