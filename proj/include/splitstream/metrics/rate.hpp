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

#include <cmath>
#include <limits>
#include <span>

#include "splitstream/codec/bitstream.hpp"
#include "splitstream/tensor.hpp"

namespace splitstream::metrics {

/// Average kilobits per image, kilo = 1000. Sizes are whole transfers
/// including container headers.
inline double kbpi_from_bytes(std::span<const std::size_t> transfer_bytes, std::size_t image_count) {
  require(!transfer_bytes.empty(), ErrorKind::kInvalidArgument, "kbpi of an empty stream list");
  require(image_count >= 1, ErrorKind::kInvalidArgument, "kbpi needs image_count >= 1");
  double bits = 0.0;
  for (auto b : transfer_bytes) bits += 8.0 * static_cast<double>(b);
  return bits / 1000.0 / static_cast<double>(image_count);
}

inline double kbpi(std::span<const codec::Bitstream> streams, std::size_t image_count) {
  std::vector<std::size_t> bytes;
  bytes.reserve(streams.size());
  for (const auto& s : streams) bytes.push_back(s.total_bytes());
  return kbpi_from_bytes(bytes, image_count);
}

template <typename T>
double mse(const Tensor<T>& a, const Tensor<T>& b) {
  if (!(a.shape() == b.shape())) fail(ErrorKind::kShape, to_string(a.shape()) + " vs " + to_string(b.shape()));
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

/// 10 log10(peak^2 / mse); +inf when mse is zero.
inline double psnr_from_mse(double mse, double peak) {
  require(peak > 0.0, ErrorKind::kInvalidArgument, "psnr peak must be positive");
  require(mse >= 0.0, ErrorKind::kInvalidArgument, "mse must be nonnegative");
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace splitstream::metrics
