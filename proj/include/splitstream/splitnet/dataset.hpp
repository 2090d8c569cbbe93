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

// Synthetic 3-class shape images: a filled circle, square or triangle (equal
// area, random position / rotation / contrast) on a random background with
// additive Gaussian noise, rendered as 32x32x1 tensors.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "splitstream/tensor.hpp"

namespace splitstream::splitnet {

struct Dataset {
  std::vector<FeatureTensor> images;
  std::vector<std::size_t> labels;

  std::size_t size() const { return images.size(); }
};

enum ShapeClass : std::size_t { kCircle = 0, kSquare = 1, kTriangle = 2 };
inline constexpr std::size_t kShapeClasses = 3;

struct ShapeStyle {
  std::size_t side = 32;
  double min_radius = 5.0;  // radius of the equal-area circle
  double max_radius = 10.0;
  double noise_sigma = 0.1;
};

namespace detail {

inline bool inside_triangle(double px, double py, const double (&vx)[3], const double (&vy)[3]) {
  auto edge = [&](int a, int b) { return (vx[b] - vx[a]) * (py - vy[a]) - (vy[b] - vy[a]) * (px - vx[a]); };
  const double e0 = edge(0, 1), e1 = edge(1, 2), e2 = edge(2, 0);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

inline FeatureTensor render_shape(std::size_t label, std::mt19937_64& rng, const ShapeStyle& st) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double side = static_cast<double>(st.side);
  const double r = st.min_radius + (st.max_radius - st.min_radius) * u01(rng);
  const double margin = r * 1.2;
  const double cx = margin + (side - 2 * margin) * u01(rng);
  const double cy = margin + (side - 2 * margin) * u01(rng);
  const double theta = 2 * std::numbers::pi * u01(rng);
  const double background = 0.4 * u01(rng);
  const double contrast = 0.3 + 0.5 * u01(rng);
  std::normal_distribution<double> noise(0.0, st.noise_sigma);

  const double half = r * std::sqrt(std::numbers::pi) / 2.0;               // square of area pi r^2
  const double circum = r * std::sqrt(4.0 * std::numbers::pi / (3.0 * std::sqrt(3.0)));  // triangle of area pi r^2
  double vx[3], vy[3];
  for (int k = 0; k < 3; ++k) {
    const double a = theta + 2.0 * std::numbers::pi * k / 3.0;
    vx[k] = cx + circum * std::cos(a);
    vy[k] = cy + circum * std::sin(a);
  }
  const double ct = std::cos(theta), sn = std::sin(theta);

  FeatureTensor img({st.side, st.side, 1});
  for (std::size_t y = 0; y < st.side; ++y) {
    for (std::size_t x = 0; x < st.side; ++x) {
      const double px = static_cast<double>(x) + 0.5, py = static_cast<double>(y) + 0.5;
      const double dx = px - cx, dy = py - cy;
      bool in = false;
      switch (label) {
        case kCircle: in = dx * dx + dy * dy <= r * r; break;
        case kSquare: {
          const double u = ct * dx + sn * dy, v = -sn * dx + ct * dy;
          in = std::abs(u) <= half && std::abs(v) <= half;
          break;
        }
        default: in = inside_triangle(px, py, vx, vy); break;
      }
      img.at(y, x, 0) = static_cast<float>(background + (in ? contrast : 0.0) + noise(rng));
    }
  }
  return img;
}

}  // namespace detail

/// Deterministic in (seed, count, style).
inline Dataset generate_shapes(std::uint64_t seed, std::size_t count, const ShapeStyle& style = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, kShapeClasses - 1);
  Dataset d;
  d.images.reserve(count);
  d.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t label = pick(rng);
    d.labels.push_back(label);
    d.images.push_back(detail::render_shape(label, rng, style));
  }
  return d;
}

inline std::string image_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.ften", index);
  return buf;
}

/// Writes NNNNNN.ften per image and labels.csv ("index,label") into `dir`.
inline void write_dataset(const Dataset& d, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(ErrorKind::kIo, "cannot create directory " + dir);
  for (std::size_t i = 0; i < d.size(); ++i) save_tensor_file(d.images[i], (fs::path(dir) / image_file_name(i)).string());
  std::ofstream labels(fs::path(dir) / "labels.csv", std::ios::trunc);
  if (!labels) fail(ErrorKind::kIo, "cannot write labels in " + dir);
  labels << "index,label\n";
  for (std::size_t i = 0; i < d.size(); ++i) labels << i << ',' << d.labels[i] << '\n';
  if (!labels) fail(ErrorKind::kIo, "write failed for labels in " + dir);
}

inline Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream labels(fs::path(dir) / "labels.csv");
  if (!labels) fail(ErrorKind::kIo, "no labels.csv in " + dir);
  std::string line;
  if (!std::getline(labels, line) || (line != "index,label" && line != "index,label\r")) {
    fail(ErrorKind::kFormat, "labels.csv header must be 'index,label'");
  }
  Dataset d;
  while (std::getline(labels, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t index = 0, label = 0;
    char comma = 0;
    std::istringstream ls(line);
    if (!(ls >> index >> comma >> label) || comma != ',') fail(ErrorKind::kFormat, "bad labels.csv row: " + line);
    if (index != d.size()) fail(ErrorKind::kFormat, "labels.csv indices must be 0..n-1 in order");
    d.labels.push_back(label);
    d.images.push_back(load_tensor_file((fs::path(dir) / image_file_name(index)).string()));
  }
  return d;
}

}  // namespace splitstream::splitnet
