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

// YOLO (v1-style) detection loss over an S x S grid with B boxes per cell.
//
//   loss = l_coord * sum_ij 1obj_ij [(x - x^)^2 + (y - y^)^2]
//        + l_coord * sum_ij 1obj_ij [(sqrt w - sqrt w^)^2 + (sqrt h - sqrt h^)^2]
//        +           sum_ij 1obj_ij   (C_i - C^_ij)^2
//        + l_noobj * sum_ij 1noobj_ij (C_i - C^_ij)^2
//        +           sum_i  1obj_i    sum_c (p_i(c) - p^_i(c))^2
//
// Box j of cell i is responsible (1obj_ij = 1) when the cell holds an object
// and j has the largest IoU with it; ties go to the lowest j. 1noobj_ij is
// 1 - 1obj_ij. C_i is the cell's ground-truth confidence (0 for empty cells).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "splitstream/error.hpp"

namespace splitstream::metrics {

/// Center / size box in normalized image units.
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

inline double iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w / 2, b.x + b.w / 2) - std::max(a.x - a.w / 2, b.x - b.w / 2));
  const double iy = std::max(0.0, std::min(a.y + a.h / 2, b.y + b.h / 2) - std::max(a.y - a.h / 2, b.y - b.h / 2));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

struct PredictedBox {
  Box box;
  double confidence = 0.0;
};

struct CellPrediction {
  std::vector<PredictedBox> boxes;
  std::vector<double> class_probs;
};

struct TruthObject {
  Box box;
  std::vector<double> class_probs;  // one-hot
  double confidence = 1.0;
};

struct GridTruth {
  int S = 1;
  std::vector<std::optional<TruthObject>> cells;  // S*S, row-major
};

struct LossWeights {
  double lambda_coord = 5.0;
  double lambda_noobj = 0.5;
};

/// The five sums of the loss before weighting.
struct LossTerms {
  double center = 0.0;
  double size = 0.0;
  double object_confidence = 0.0;
  double empty_confidence = 0.0;
  double class_prob = 0.0;

  double weighted(const LossWeights& w) const {
    return w.lambda_coord * (center + size) + object_confidence + w.lambda_noobj * empty_confidence + class_prob;
  }
};

/// Index of the responsible box: highest IoU with `truth`, lowest index on ties.
inline std::size_t responsible_box(const Box& truth, const std::vector<PredictedBox>& boxes) {
  std::size_t best = 0;
  double best_iou = -1.0;
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    const double v = iou(truth, boxes[j].box);
    if (v > best_iou) {
      best_iou = v;
      best = j;
    }
  }
  return best;
}

namespace detail {

inline void check_box(const Box& b) {
  if (!(std::isfinite(b.x) && std::isfinite(b.y) && std::isfinite(b.w) && std::isfinite(b.h))) {
    fail(ErrorKind::kRange, "non-finite box");
  }
  if (b.w < 0.0 || b.h < 0.0) fail(ErrorKind::kRange, "negative box width/height");
}

inline double sq(double v) { return v * v; }

}  // namespace detail

inline LossTerms yolo_loss_terms(const GridTruth& truth, const std::vector<CellPrediction>& pred) {
  require(truth.S >= 1, ErrorKind::kShape, "grid side must be >= 1");
  const std::size_t cells = static_cast<std::size_t>(truth.S) * static_cast<std::size_t>(truth.S);
  require(truth.cells.size() == cells && pred.size() == cells, ErrorKind::kShape, "grid cell count != S*S");
  const std::size_t B = pred[0].boxes.size();
  const std::size_t classes = pred[0].class_probs.size();
  require(B >= 1, ErrorKind::kShape, "need at least one box per cell");

  LossTerms t;
  for (std::size_t i = 0; i < cells; ++i) {
    const CellPrediction& p = pred[i];
    require(p.boxes.size() == B, ErrorKind::kShape, "box count differs between cells");
    require(p.class_probs.size() == classes, ErrorKind::kShape, "class count differs between cells");
    for (const auto& pb : p.boxes) detail::check_box(pb.box);

    const auto& obj = truth.cells[i];
    if (!obj) {
      for (const auto& pb : p.boxes) t.empty_confidence += detail::sq(0.0 - pb.confidence);
      continue;
    }
    detail::check_box(obj->box);
    require(obj->class_probs.size() == classes, ErrorKind::kShape, "truth class count != prediction class count");
    const std::size_t r = responsible_box(obj->box, p.boxes);
    for (std::size_t j = 0; j < B; ++j) {
      const PredictedBox& pb = p.boxes[j];
      if (j == r) {
        t.center += detail::sq(obj->box.x - pb.box.x) + detail::sq(obj->box.y - pb.box.y);
        t.size += detail::sq(std::sqrt(obj->box.w) - std::sqrt(pb.box.w)) +
                  detail::sq(std::sqrt(obj->box.h) - std::sqrt(pb.box.h));
        t.object_confidence += detail::sq(obj->confidence - pb.confidence);
      } else {
        t.empty_confidence += detail::sq(obj->confidence - pb.confidence);
      }
    }
    for (std::size_t c = 0; c < classes; ++c) t.class_prob += detail::sq(obj->class_probs[c] - p.class_probs[c]);
  }
  return t;
}

inline double yolo_loss(const GridTruth& truth, const std::vector<CellPrediction>& pred,
                        const LossWeights& weights = {}) {
  require(weights.lambda_coord >= 0.0 && weights.lambda_noobj >= 0.0, ErrorKind::kInvalidArgument,
          "loss weights must be nonnegative");
  return yolo_loss_terms(truth, pred).weighted(weights);
}

}  // namespace splitstream::metrics
