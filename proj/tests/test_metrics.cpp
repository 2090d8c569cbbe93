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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bd_oracle.hpp"
#include "yolo_oracle.hpp"
#include "test_util.hpp"

namespace splitstream {
namespace {

using namespace metrics;
using testing::one_cell;
using testing::random_curve;
using testing::random_grid;
using testing::reference_terms;

// ---------------------------------------------------------------------------
// rate and distortion

TEST(Kbpi, UnitConversion) {
  const std::size_t one[] = {1000};
  EXPECT_DOUBLE_EQ(kbpi_from_bytes(one, 1), 8.0);
  const std::size_t two[] = {500, 1500};
  EXPECT_DOUBLE_EQ(kbpi_from_bytes(two, 2), 8.0);
  codec::Bitstream empty;
  EXPECT_EQ(empty.total_bytes(), 40u);
  EXPECT_DOUBLE_EQ(kbpi(std::span<const codec::Bitstream>(&empty, 1), 1), 0.32);
  EXPECT_THROW(kbpi_from_bytes({}, 1), Error);
  EXPECT_THROW(kbpi_from_bytes(one, 0), Error);
}

TEST(Kbpi, MatchesPackedBytes) {
  std::mt19937_64 rng(71);
  std::vector<codec::Bitstream> streams;
  std::size_t wire = 0;
  for (int i = 0; i < 5; ++i) {
    streams.push_back(compress(testing::random_tensor(rng, {6, 6, 4}), {}));
    wire += codec::pack(streams.back()).size();
  }
  EXPECT_DOUBLE_EQ(kbpi(streams, streams.size()), wire * 8.0 / 1000.0 / 5.0);
}

TEST(Distortion, MseAndPsnr) {
  const FeatureTensor a({2, 1, 1}, {0.0f, 0.0f}), b({2, 1, 1}, {1.0f, 1.0f}), c({2, 1, 1}, {0.0f, 2.0f});
  EXPECT_EQ(mse(a, a), 0.0);
  EXPECT_EQ(psnr_from_mse(0.0, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(mse(a, b), 1.0);
  EXPECT_DOUBLE_EQ(psnr_from_mse(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(mse(c, b), 1.0);
  EXPECT_NEAR(psnr_from_mse(1.0, 255.0), 48.1308036, 1e-6);
  EXPECT_THROW(mse(a, FeatureTensor({1, 2, 1})), Error);
  EXPECT_THROW(psnr_from_mse(1.0, 0.0), Error);
}

// ---------------------------------------------------------------------------
// IoU and YOLO loss

TEST(Iou, Examples) {
  const Box unit{0.5, 0.5, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(iou(unit, unit), 1.0);
  EXPECT_DOUBLE_EQ(iou(unit, Box{3.0, 3.0, 1.0, 1.0}), 0.0);
  EXPECT_NEAR(iou(unit, Box{1.0, 0.5, 1.0, 1.0}), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(iou(Box{0, 0, 0, 0}, Box{0, 0, 0, 0}), 0.0);
}

TEST(Iou, SymmetricAndBounded) {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> pos(0.0, 1.0), size(0.01, 0.8);
  for (int i = 0; i < 500; ++i) {
    const Box a{pos(rng), pos(rng), size(rng), size(rng)}, b{pos(rng), pos(rng), size(rng), size(rng)};
    ASSERT_DOUBLE_EQ(iou(a, b), iou(b, a));
    ASSERT_GE(iou(a, b), 0.0);
    ASSERT_LE(iou(a, b), 1.0);
    ASSERT_NEAR(iou(a, a), 1.0, 1e-12);
  }
}

TEST(YoloLoss, PerfectPredictionIsZero) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  const int S = 3;
  GridTruth truth{S, {}};
  std::vector<CellPrediction> pred;
  for (int i = 0; i < S * S; ++i) {
    if (i % 2 == 0) {
      const Box b{u(rng), u(rng), u(rng), u(rng)};
      truth.cells.push_back(TruthObject{b, {1.0, 0.0, 0.0}, 1.0});
      // A second, far-off box with confidence matching C_i.
      pred.push_back({{{b, 1.0}, {{5.0, 5.0, 0.1, 0.1}, 1.0}}, {1.0, 0.0, 0.0}});
    } else {
      truth.cells.push_back(std::nullopt);
      pred.push_back({{{{u(rng), u(rng), u(rng), u(rng)}, 0.0}, {{u(rng), u(rng), u(rng), u(rng)}, 0.0}}, {0.2, 0.3, 0.5}});
    }
  }
  EXPECT_EQ(yolo_loss(truth, pred), 0.0);
}

TEST(YoloLoss, ObjectConfidenceExample) {
  const Box b{0.5, 0.5, 0.2, 0.3};
  const std::vector<CellPrediction> pred = {{{{b, 0.5}}, {0.0, 1.0}}};
  EXPECT_NEAR(yolo_loss(one_cell(true, b), pred), 0.25, 1e-9);
}

TEST(YoloLoss, EmptyCellExample) {
  const std::vector<CellPrediction> pred = {{{{{0.3, 0.3, 0.1, 0.1}, 0.2}}, {0.4, 0.6}}};
  EXPECT_NEAR(yolo_loss(one_cell(false), pred), 0.02, 1e-9);
}

TEST(YoloLoss, HandEvaluatedTerms) {
  // Truth box (0.5, 0.5, 0.25, 0.16); responsible prediction (0.6, 0.4, 0.36, 0.09).
  const Box t{0.5, 0.5, 0.25, 0.16};
  const std::vector<CellPrediction> pred = {{{{{0.6, 0.4, 0.36, 0.09}, 0.7}}, {0.1, 0.8}}};
  const auto terms = yolo_loss_terms(one_cell(true, t), pred);
  EXPECT_NEAR(terms.center, 0.01 + 0.01, 1e-12);
  EXPECT_NEAR(terms.size, 0.01 + 0.01, 1e-12);  // (0.5-0.6)^2 + (0.4-0.3)^2
  EXPECT_NEAR(terms.object_confidence, 0.09, 1e-12);
  EXPECT_NEAR(terms.empty_confidence, 0.0, 1e-12);
  EXPECT_NEAR(terms.class_prob, 0.01 + 0.04, 1e-12);
  EXPECT_NEAR(yolo_loss(one_cell(true, t), pred), 5 * 0.04 + 0.09 + 0.05, 1e-12);
}

TEST(YoloLoss, ResponsibilityTieGoesToLowestIndex) {
  const Box t{0.5, 0.5, 0.2, 0.2};
  const std::vector<PredictedBox> boxes = {{{0.6, 0.5, 0.2, 0.2}, 0.1}, {{0.4, 0.5, 0.2, 0.2}, 0.9}};
  EXPECT_EQ(responsible_box(t, boxes), 0u);
  const std::vector<PredictedBox> better = {{{0.65, 0.5, 0.2, 0.2}, 0.1}, {{0.45, 0.5, 0.2, 0.2}, 0.9}};
  EXPECT_EQ(responsible_box(t, better), 1u);
}

TEST(YoloLoss, TermIsolation) {
  std::mt19937_64 rng(74);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_grid(rng, 1 + static_cast<int>(rng() % 4), 1 + rng() % 3, 2 + rng() % 4);
    const auto ref = reference_terms(g);
    const double full = yolo_loss(g.truth, g.pred);
    const double no_coord = yolo_loss(g.truth, g.pred, {0.0, 0.5});
    const double no_noobj = yolo_loss(g.truth, g.pred, {5.0, 0.0});
    ASSERT_NEAR(full, 5 * (ref.center + ref.size) + ref.object_confidence + 0.5 * ref.empty_confidence + ref.class_prob, 1e-12);
    ASSERT_NEAR(full - no_coord, 5 * (ref.center + ref.size), 1e-12);
    ASSERT_NEAR(full - no_noobj, 0.5 * ref.empty_confidence, 1e-12);
    const auto terms = yolo_loss_terms(g.truth, g.pred);
    ASSERT_NEAR(terms.class_prob, ref.class_prob, 1e-12);
    ASSERT_NEAR(terms.object_confidence, ref.object_confidence, 1e-12);
  }
}

TEST(YoloLoss, InvariantToNonResponsibleOrder) {
  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_grid(rng, 2, 4, 3);
    const double before = yolo_loss(g.truth, g.pred);
    for (std::size_t i = 0; i < g.pred.size(); ++i) {
      auto& boxes = g.pred[i].boxes;
      const std::size_t r = g.truth.cells[i] ? responsible_box(g.truth.cells[i]->box, boxes) : 0;
      const PredictedBox keep = boxes[r];
      std::vector<PredictedBox> others;
      for (std::size_t j = 0; j < boxes.size(); ++j)
        if (j != r) others.push_back(boxes[j]);
      std::shuffle(others.begin(), others.end(), rng);
      // Keep the responsible box first so later exact-IoU ties cannot steal it.
      boxes.clear();
      boxes.push_back(keep);
      boxes.insert(boxes.end(), others.begin(), others.end());
    }
    ASSERT_NEAR(yolo_loss(g.truth, g.pred), before, 1e-12);
  }
}

TEST(YoloLoss, RejectsInvalidInput) {
  const std::vector<CellPrediction> neg = {{{{{0.5, 0.5, -0.1, 0.1}, 0.5}}, {0.0, 1.0}}};
  EXPECT_THROW(yolo_loss(one_cell(true), neg), Error);
  const std::vector<CellPrediction> ok = {{{{{0.5, 0.5, 0.1, 0.1}, 0.5}}, {0.0, 1.0}}};
  EXPECT_THROW(yolo_loss(GridTruth{2, {}}, ok), Error);
  const std::vector<CellPrediction> classes = {{{{{0.5, 0.5, 0.1, 0.1}, 0.5}}, {1.0}}};
  EXPECT_THROW(yolo_loss(one_cell(true), classes), Error);
  EXPECT_THROW(yolo_loss(one_cell(true), ok, {-1.0, 0.5}), Error);
}

// ---------------------------------------------------------------------------
// BD-rate

RDCurve curve(std::initializer_list<std::pair<double, double>> rate_quality) {
  RDCurve c;
  for (auto [r, q] : rate_quality) c.points.push_back({r, q});
  return c;
}

RDCurve scaled(RDCurve c, double k) {
  for (auto& p : c.points) p.rate_kbpi *= k;
  return c;
}

const RDCurve kReference = curve({{100, 0.60}, {150, 0.65}, {220, 0.70}, {300, 0.73}});
const RDCurve kTest = curve({{80, 0.60}, {120, 0.65}, {180, 0.70}, {260, 0.73}});

TEST(BdRate, IdentityIsZero) { EXPECT_NEAR(bd_delta_rate(kReference, kReference), 0.0, 1e-10); }

TEST(BdRate, HalvedRates) { EXPECT_NEAR(bd_delta_rate(kReference, scaled(kReference, 0.5)), -50.0, 1e-8); }

TEST(BdRate, WorkedExampleMatchesOracle) {
  const double got = bd_delta_rate(kReference, kTest);
  const double want = testing::oracle_bd_rate(kReference, kTest);
  EXPECT_NEAR(got, want, 0.1);
  // Frozen from a separate numpy polyfit + trapezoid evaluation.
  EXPECT_NEAR(got, -18.8856, 1e-3);
}

TEST(BdRate, RandomPairsMatchOracle) {
  std::mt19937_64 rng(76);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + rng() % 4;
    const auto a = random_curve(rng, n), b = random_curve(rng, 4 + rng() % 4);
    double want;
    try {
      want = testing::oracle_bd_rate(a, b);
      overlap(a, b);
    } catch (const Error&) {
      continue;
    }
    ASSERT_NEAR(bd_delta_rate(a, b), want, 0.1) << "trial " << trial;
  }
}

TEST(BdRate, LogAntisymmetry) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_curve(rng, 5), b = random_curve(rng, 5);
    double ab, ba;
    try {
      ab = bd_delta_rate(a, b);
      ba = bd_delta_rate(b, a);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kNonOverlap);
      continue;
    }
    ASSERT_NEAR((1 + ab / 100) * (1 + ba / 100), 1.0, 0.005);
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(BdRate, ScaleInvariance) {
  for (double k : {0.1, 10.0}) {
    EXPECT_NEAR(bd_delta_rate(scaled(kReference, k), scaled(kTest, k)), bd_delta_rate(kReference, kTest), 1e-9);
  }
}

TEST(BdRate, OrderOfPointsIsIrrelevant) {
  RDCurve shuffled = kTest;
  std::reverse(shuffled.points.begin(), shuffled.points.end());
  EXPECT_NEAR(bd_delta_rate(kReference, shuffled), bd_delta_rate(kReference, kTest), 1e-10);
}

ErrorKind bd_error(const RDCurve& a, const RDCurve& b) {
  try {
    bd_delta_rate(a, b);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "bd succeeded";
  return ErrorKind::kInvalidArgument;
}

TEST(BdRate, Errors) {
  const auto far = curve({{10, 0.1}, {20, 0.2}, {30, 0.3}, {40, 0.4}});
  EXPECT_EQ(bd_error(kReference, far), ErrorKind::kNonOverlap);
  EXPECT_EQ(bd_error(kReference, curve({{10, 0.6}, {20, 0.65}, {30, 0.7}})), ErrorKind::kDegenerate);
  EXPECT_EQ(bd_error(kReference, curve({{10, 0.6}, {20, 0.65}, {30, 0.65}, {40, 0.7}})), ErrorKind::kDegenerate);
  EXPECT_EQ(bd_error(kReference, curve({{-10, 0.6}, {20, 0.65}, {30, 0.68}, {40, 0.7}})), ErrorKind::kInvalidArgument);
}

TEST(BdRate, MonotoneHull) {
  const auto c = curve({{5, 0.5}, {1, 0.2}, {3, 0.45}, {4, 0.4}, {6, 0.5}, {7, 0.7}, {7, 0.72}});
  const auto h = monotone_hull(c);
  EXPECT_EQ(h, curve({{1, 0.2}, {3, 0.45}, {5, 0.5}, {7, 0.72}}));
}

TEST(RdCsv, RoundTripAndErrors) {
  std::stringstream s;
  write_curve_csv(kTest, s);
  EXPECT_EQ(s.str().substr(0, 13), "quality,kbpi\n");
  EXPECT_EQ(read_curve_csv(s), kTest);
  std::stringstream bad("rate,quality\n1,2\n");
  EXPECT_THROW(read_curve_csv(bad), Error);
  std::stringstream bad2("quality,kbpi\n0.5;3\n");
  EXPECT_THROW(read_curve_csv(bad2), Error);
  std::stringstream crlf("quality,kbpi\r\n0.5,3\r\n0.6,4\r\n");
  EXPECT_EQ(read_curve_csv(crlf), curve({{3, 0.5}, {4, 0.6}}));
}

}  // namespace
}  // namespace splitstream
