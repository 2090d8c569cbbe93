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

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace splitstream::codec {

template <int N>
using Block = std::array<double, N * N>;

/// Orthonormal DCT-II basis: basis[k][n] = s_k cos(pi (2n + 1) k / 2N).
template <int N>
const std::array<std::array<double, N>, N>& dct_basis() {
  static const auto basis = [] {
    std::array<std::array<double, N>, N> b{};
    for (int k = 0; k < N; ++k) {
      const double s = k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
      for (int n = 0; n < N; ++n) b[k][n] = s * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * N));
    }
    return b;
  }();
  return basis;
}

/// Separable 2-D DCT-II, row-major N x N.
template <int N>
Block<N> forward_dct(const Block<N>& x) {
  const auto& b = dct_basis<N>();
  Block<N> tmp{}, out{};
  // rows
  for (int r = 0; r < N; ++r)
    for (int k = 0; k < N; ++k) {
      double acc = 0.0;
      for (int n = 0; n < N; ++n) acc += b[k][n] * x[r * N + n];
      tmp[r * N + k] = acc;
    }
  // columns
  for (int k = 0; k < N; ++k)
    for (int c = 0; c < N; ++c) {
      double acc = 0.0;
      for (int n = 0; n < N; ++n) acc += b[k][n] * tmp[n * N + c];
      out[k * N + c] = acc;
    }
  return out;
}

template <int N>
Block<N> inverse_dct(const Block<N>& coef) {
  const auto& b = dct_basis<N>();
  Block<N> tmp{}, out{};
  for (int n = 0; n < N; ++n)
    for (int c = 0; c < N; ++c) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += b[k][n] * coef[k * N + c];
      tmp[n * N + c] = acc;
    }
  for (int r = 0; r < N; ++r)
    for (int n = 0; n < N; ++n) {
      double acc = 0.0;
      for (int k = 0; k < N; ++k) acc += b[k][n] * tmp[r * N + k];
      out[r * N + n] = acc;
    }
  return out;
}

/// Zigzag scan: entry i is the raster index of the i-th coefficient visited.
template <int N>
const std::array<int, N * N>& zigzag_order() {
  static const auto order = [] {
    std::array<int, N * N> z{};
    int i = 0;
    for (int s = 0; s <= 2 * (N - 1); ++s) {
      if (s % 2 == 0) {
        // up-right: row decreasing
        for (int r = std::min(s, N - 1); r >= 0 && s - r < N; --r) z[i++] = r * N + (s - r);
      } else {
        for (int c = std::min(s, N - 1); c >= 0 && s - c < N; --c) z[i++] = (s - c) * N + c;
      }
    }
    return z;
  }();
  return order;
}

}  // namespace splitstream::codec
