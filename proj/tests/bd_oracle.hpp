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

// Independent Bjontegaard reference: exact cubic through the points (Lagrange
// form for four points, normal equations in long double otherwise) and a
// dense trapezoid rule over the shared quality interval.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "splitstream/metrics/bd_rate.hpp"

namespace splitstream::testing {

struct Poly3 {
  std::array<long double, 4> c{};  // in raw quality
  long double operator()(long double q) const { return ((c[3] * q + c[2]) * q + c[1]) * q + c[0]; }
};

inline Poly3 oracle_fit(const metrics::RDCurve& curve) {
  const auto& p = curve.points;
  Poly3 out;
  if (p.size() == 4) {
    // Expand each Lagrange basis polynomial into monomials.
    for (std::size_t i = 0; i < 4; ++i) {
      std::array<long double, 4> basis{1, 0, 0, 0};
      long double denom = 1;
      for (std::size_t j = 0; j < 4; ++j) {
        if (j == i) continue;
        std::array<long double, 4> next{};
        for (int k = 0; k < 3; ++k) {
          next[k + 1] += basis[k];
          next[k] -= basis[k] * p[j].quality;
        }
        basis = next;
        denom *= p[i].quality - p[j].quality;
      }
      const long double y = std::log10(static_cast<long double>(p[i].rate_kbpi));
      for (int k = 0; k < 4; ++k) out.c[k] += y * basis[k] / denom;
    }
    return out;
  }
  long double m[4][5] = {};
  for (const auto& pt : p) {
    long double pw[7];
    pw[0] = 1;
    for (int k = 1; k < 7; ++k) pw[k] = pw[k - 1] * pt.quality;
    const long double y = std::log10(static_cast<long double>(pt.rate_kbpi));
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m[r][c] += pw[r + c];
      m[r][4] += pw[r] * y;
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    for (int c = 0; c < 5; ++c) std::swap(m[col][c], m[piv][c]);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const long double f = m[r][col] / m[col][col];
      for (int c = 0; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int k = 0; k < 4; ++k) out.c[k] = m[k][4] / m[k][k];
  return out;
}

inline double oracle_bd_rate(const metrics::RDCurve& ref, const metrics::RDCurve& test, int samples = 20000) {
  auto range = [](const metrics::RDCurve& c) {
    double lo = c.points[0].quality, hi = lo;
    for (const auto& p : c.points) {
      lo = std::min(lo, p.quality);
      hi = std::max(hi, p.quality);
    }
    return std::pair{lo, hi};
  };
  const auto [alo, ahi] = range(ref);
  const auto [blo, bhi] = range(test);
  const long double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
  const Poly3 fr = oracle_fit(ref), ft = oracle_fit(test);
  const long double h = (hi - lo) / samples;
  long double acc = 0;
  for (int i = 0; i <= samples; ++i) {
    const long double q = lo + h * i;
    const long double d = ft(q) - fr(q);
    acc += (i == 0 || i == samples) ? d / 2 : d;
  }
  const long double mean = acc * h / (hi - lo);
  return static_cast<double>((std::pow(10.0L, mean) - 1) * 100);
}

/// Increasing-quality, increasing-rate curve of n points.
inline metrics::RDCurve random_curve(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> q0(0.4, 0.6), dq(0.02, 0.08), r0(20.0, 200.0), gain(1.15, 1.8);
  metrics::RDCurve c;
  double q = q0(rng), r = r0(rng);
  for (std::size_t i = 0; i < n; ++i) {
    c.points.push_back({r, q});
    q += dq(rng);
    r *= gain(rng);
  }
  return c;
}

}  // namespace splitstream::testing
