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

// Bjontegaard delta rate between two rate/quality curves.
//
// log10(rate) is fitted as a cubic in quality for each curve (least squares,
// exact interpolation for four points), both fits are integrated over the
// shared quality interval, and the mean log-rate gap is reported as a
// percentage: (10^(mean(test - ref)) - 1) * 100. Negative values mean the
// test curve needs fewer bits for the same quality. The quality axis can be
// any monotone metric (accuracy, PSNR, mAP).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "splitstream/error.hpp"

namespace splitstream::metrics {

struct RDPoint {
  double rate_kbpi = 0.0;
  double quality = 0.0;

  friend bool operator==(const RDPoint&, const RDPoint&) = default;
};

struct RDCurve {
  std::vector<RDPoint> points;

  void sort_by_rate() {
    std::stable_sort(points.begin(), points.end(),
                     [](const RDPoint& a, const RDPoint& b) { return a.rate_kbpi < b.rate_kbpi; });
  }
  friend bool operator==(const RDCurve&, const RDCurve&) = default;
};

/// Drops every point that does not improve quality over all cheaper points,
/// leaving a curve whose quality strictly increases with rate.
inline RDCurve monotone_hull(RDCurve curve) {
  curve.sort_by_rate();
  RDCurve out;
  for (const auto& p : curve.points) {
    if (!out.points.empty() && p.rate_kbpi == out.points.back().rate_kbpi) {
      if (p.quality > out.points.back().quality) out.points.back() = p;
      continue;
    }
    if (out.points.empty() || p.quality > out.points.back().quality) out.points.push_back(p);
  }
  // A same-rate replacement can break monotonicity with the point before it.
  RDCurve clean;
  for (const auto& p : out.points)
    if (clean.points.empty() || p.quality > clean.points.back().quality) clean.points.push_back(p);
  return clean;
}

/// Cubic fit of log10(rate) against quality, in a centred/scaled variable.
struct LogRateFit {
  std::array<double, 4> coef{};  // in t = (q - centre) / scale
  double centre = 0.0;
  double scale = 1.0;

  double operator()(double q) const {
    const double t = (q - centre) / scale;
    return ((coef[3] * t + coef[2]) * t + coef[1]) * t + coef[0];
  }

  /// Integral over quality of the fitted log-rate, from lo to hi.
  double integral(double lo, double hi) const {
    auto antiderivative = [&](double q) {
      const double t = (q - centre) / scale;
      return scale * t * (coef[0] + t * (coef[1] / 2 + t * (coef[2] / 3 + t * coef[3] / 4)));
    };
    return antiderivative(hi) - antiderivative(lo);
  }
};

namespace detail {

inline void check_curve(const RDCurve& c, const char* which) {
  if (c.points.size() < 4) {
    fail(ErrorKind::kDegenerate, std::string(which) + " curve needs at least 4 points, has " +
                                     std::to_string(c.points.size()));
  }
  std::vector<double> q;
  for (const auto& p : c.points) {
    if (!(p.rate_kbpi > 0.0) || !std::isfinite(p.rate_kbpi) || !std::isfinite(p.quality)) {
      fail(ErrorKind::kInvalidArgument, std::string(which) + " curve has a non-positive or non-finite point");
    }
    q.push_back(p.quality);
  }
  std::sort(q.begin(), q.end());
  if (std::adjacent_find(q.begin(), q.end()) != q.end()) {
    fail(ErrorKind::kDegenerate, std::string(which) + " curve has duplicate quality values");
  }
}

}  // namespace detail

inline LogRateFit fit_log_rate(const RDCurve& c) {
  const std::size_t n = c.points.size();
  double lo = c.points[0].quality, hi = lo, sum = 0.0;
  for (const auto& p : c.points) {
    lo = std::min(lo, p.quality);
    hi = std::max(hi, p.quality);
    sum += p.quality;
  }
  LogRateFit fit;
  fit.centre = sum / static_cast<double>(n);
  fit.scale = hi > lo ? (hi - lo) / 2 : 1.0;

  Eigen::MatrixXd A(n, 4);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (c.points[i].quality - fit.centre) / fit.scale;
    A(i, 0) = 1.0;
    A(i, 1) = t;
    A(i, 2) = t * t;
    A(i, 3) = t * t * t;
    b(i) = std::log10(c.points[i].rate_kbpi);
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  for (int i = 0; i < 4; ++i) fit.coef[i] = x(i);
  return fit;
}

/// Quality interval shared by both curves; throws kNonOverlap if empty.
inline std::pair<double, double> overlap(const RDCurve& a, const RDCurve& b) {
  auto range = [](const RDCurve& c) {
    auto [mn, mx] = std::minmax_element(c.points.begin(), c.points.end(),
                                        [](const RDPoint& x, const RDPoint& y) { return x.quality < y.quality; });
    return std::pair{mn->quality, mx->quality};
  };
  const auto [alo, ahi] = range(a);
  const auto [blo, bhi] = range(b);
  const double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
  if (!(hi > lo)) fail(ErrorKind::kNonOverlap, "quality ranges do not overlap");
  return {lo, hi};
}

inline double bd_delta_rate(const RDCurve& reference, const RDCurve& test) {
  detail::check_curve(reference, "reference");
  detail::check_curve(test, "test");
  const auto [lo, hi] = overlap(reference, test);
  const double ref_int = fit_log_rate(reference).integral(lo, hi);
  const double test_int = fit_log_rate(test).integral(lo, hi);
  return (std::pow(10.0, (test_int - ref_int) / (hi - lo)) - 1.0) * 100.0;
}

// RDCurve CSV: header "quality,kbpi", one point per line.

inline void write_curve_csv(const RDCurve& c, std::ostream& out) {
  out << "quality,kbpi\n";
  out << std::setprecision(17);
  for (const auto& p : c.points) out << p.quality << ',' << p.rate_kbpi << '\n';
}

inline RDCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::kFormat, "empty curve file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "quality,kbpi") fail(ErrorKind::kFormat, "curve header must be 'quality,kbpi'");
  RDCurve c;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::kFormat, "line " + std::to_string(lineno) + ": expected two fields");
    RDPoint p;
    std::istringstream qs(line.substr(0, comma)), rs(line.substr(comma + 1));
    qs.imbue(std::locale::classic());
    rs.imbue(std::locale::classic());
    if (!(qs >> p.quality) || !(rs >> p.rate_kbpi)) {
      fail(ErrorKind::kFormat, "line " + std::to_string(lineno) + ": bad number");
    }
    c.points.push_back(p);
  }
  return c;
}

inline RDCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path);
  return read_curve_csv(in);
}

}  // namespace splitstream::metrics
