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

// Q-layer and inverse Q-layer: uniform min/max quantization of a whole
// feature tensor to n-bit unsigned integers, with the (min, max) pair carried
// alongside as two 32-bit floats.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "splitstream/tensor.hpp"

namespace splitstream {

inline bool is_supported_bit_depth(int n_bit) { return n_bit == 8 || n_bit == 10 || n_bit == 12; }

inline std::uint32_t max_level(int n_bit) { return (std::uint32_t{1} << n_bit) - 1; }

/// Side information needed to invert the quantizer. Serialized as 8 bytes.
struct QuantHeader {
  float vmin = 0.0f;
  float vmax = 0.0f;
  int n_bit = 8;

  friend bool operator==(const QuantHeader&, const QuantHeader&) = default;
};

inline constexpr std::size_t kQuantHeaderBytes = 8;

struct QuantizedTensor {
  Shape shape;
  QuantHeader header;
  std::vector<std::uint16_t> data;

  friend bool operator==(const QuantizedTensor&, const QuantizedTensor&) = default;
};

// Inputs are nonnegative on every call path, so this is round-half-up there.
inline double round_half_away(double x) { return std::round(x); }

/// round((x - min) / (max - min) * (2^n - 1)) with min/max narrowed to f32
/// first; a constant tensor quantizes to all zeros.
template <typename T>
QuantizedTensor quantize(const Tensor<T>& v, int n_bit) {
  if (!is_supported_bit_depth(n_bit)) {
    fail(ErrorKind::kInvalidArgument, "unsupported bit depth " + std::to_string(n_bit));
  }
  const TensorStats stats = minmax(v);
  QuantizedTensor q{v.shape(), {stats.min, stats.max, n_bit}, std::vector<std::uint16_t>(v.size(), 0)};
  const double lo = stats.min;
  const double range = static_cast<double>(stats.max) - lo;
  if (range == 0.0) return q;
  const double levels = max_level(n_bit);
  const double scale = levels / range;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double level = round_half_away((static_cast<double>(v[i]) - lo) * scale);
    // f32 narrowing of min/max can place an extreme sample a hair outside.
    level = std::clamp(level, 0.0, levels);
    q.data[i] = static_cast<std::uint16_t>(level);
  }
  return q;
}

/// q * (max - min) / (2^n - 1) + min, evaluated in double and narrowed to f32.
inline FeatureTensor dequantize(const QuantizedTensor& q) {
  if (!is_supported_bit_depth(q.header.n_bit)) {
    fail(ErrorKind::kInvalidArgument, "unsupported bit depth " + std::to_string(q.header.n_bit));
  }
  require(q.data.size() == q.shape.volume(), ErrorKind::kShape, "quantized data length != shape volume");
  const std::uint32_t top = max_level(q.header.n_bit);
  const double lo = q.header.vmin;
  const double range = static_cast<double>(q.header.vmax) - lo;
  const double levels = top;
  std::vector<float> out(q.data.size());
  for (std::size_t i = 0; i < q.data.size(); ++i) {
    if (q.data[i] > top) {
      fail(ErrorKind::kRange, "sample " + std::to_string(q.data[i]) + " at index " + std::to_string(i) +
                                  " exceeds " + std::to_string(q.header.n_bit) + "-bit range");
    }
    out[i] = range == 0.0 ? q.header.vmin : static_cast<float>(q.data[i] * range / levels + lo);
  }
  return FeatureTensor(q.shape, std::move(out));
}

}  // namespace splitstream
