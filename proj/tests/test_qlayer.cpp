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

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"

namespace splitstream {
namespace {

using testing::random_shape;
using testing::random_tensor;

std::vector<std::uint16_t> q_of(std::vector<float> v, int n_bit) {
  const std::size_t n = v.size();
  return quantize(FeatureTensor({n, 1, 1}, std::move(v)), n_bit).data;
}

TEST(Quantize, Endpoints) {
  const auto q = quantize(FeatureTensor({2, 1, 1}, {0.0f, 1.0f}), 8);
  EXPECT_EQ(q.data, (std::vector<std::uint16_t>{0, 255}));
  EXPECT_EQ(q.header.vmin, 0.0f);
  EXPECT_EQ(q.header.vmax, 1.0f);
  EXPECT_EQ(q_of({0.0f, 1.0f}, 10), (std::vector<std::uint16_t>{0, 1023}));
  EXPECT_EQ(q_of({0.0f, 1.0f}, 12), (std::vector<std::uint16_t>{0, 4095}));
}

TEST(Quantize, HandExample) { EXPECT_EQ(q_of({-1.0f, 0.0f, 2.0f}, 8), (std::vector<std::uint16_t>{0, 85, 255})); }

TEST(Quantize, ConstantTensorIsAllZero) {
  const auto q = quantize(FeatureTensor({3, 3, 2}, 1.5f), 8);
  EXPECT_TRUE(std::all_of(q.data.begin(), q.data.end(), [](auto s) { return s == 0; }));
  EXPECT_EQ(q.header.vmin, 1.5f);
  EXPECT_EQ(q.header.vmax, 1.5f);
}

TEST(Quantize, TiesRoundAwayFromZero) {
  // A 255 span maps sample x to level x, so .5 samples sit on exact ties.
  EXPECT_EQ(q_of({0.0f, 0.5f, 255.0f}, 8), (std::vector<std::uint16_t>{0, 1, 255}));
  EXPECT_EQ(q_of({0.0f, 1.5f, 255.0f}, 8), (std::vector<std::uint16_t>{0, 2, 255}));
}

TEST(Quantize, RejectsBadInput) {
  EXPECT_THROW(q_of({0.0f, 1.0f}, 9), Error);
  EXPECT_THROW(q_of({0.0f, NAN}, 8), Error);
}

TEST(Dequantize, HandExamples) {
  QuantizedTensor q{{2, 1, 1}, {0.0f, 1.0f, 8}, {0, 255}};
  EXPECT_EQ(dequantize(q).values(), (std::vector<float>{0.0f, 1.0f}));
  QuantizedTensor r{{1, 1, 1}, {-1.0f, 2.0f, 8}, {85}};
  EXPECT_EQ(dequantize(r).values(), (std::vector<float>{0.0f}));
  QuantizedTensor d{{1, 1, 1}, {1.5f, 1.5f, 8}, {7}};
  EXPECT_EQ(dequantize(d).values(), (std::vector<float>{1.5f}));
}

TEST(Dequantize, RejectsOutOfRangeSample) {
  QuantizedTensor q{{1, 1, 1}, {0.0f, 1.0f, 8}, {256}};
  try {
    dequantize(q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRange);
  }
  q.header.n_bit = 10;
  EXPECT_NO_THROW(dequantize(q));
}

class QlayerProperty : public ::testing::TestWithParam<int> {};

TEST_P(QlayerProperty, ErrorBound) {
  const int n_bit = GetParam();
  std::mt19937_64 rng(100 + n_bit);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_real_distribution<float> centre(-50.0f, 50.0f), spread(1e-3f, 40.0f);
    const float c = centre(rng), s = spread(rng);
    const auto v = random_tensor(rng, random_shape(rng, 8, 8), c - s, c + s);
    const auto st = minmax(v);
    const double range = double{st.max} - st.min;
    const auto back = dequantize(quantize(v, n_bit));
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(double{v[i]} - back[i]));
    ASSERT_LE(worst, range / (2.0 * max_level(n_bit)) + 1e-6 * range) << "trial " << trial;
  }
}

TEST_P(QlayerProperty, Monotone) {
  const int n_bit = GetParam();
  std::mt19937_64 rng(200 + n_bit);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_tensor(rng, random_shape(rng, 6, 6), -3.0f, 7.0f);
    const auto q = quantize(v, n_bit);
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[i] <= v[j]) ASSERT_LE(q.data[i], q.data[j]);
      }
    }
  }
}

TEST_P(QlayerProperty, Idempotent) {
  const int n_bit = GetParam();
  std::mt19937_64 rng(300 + n_bit);
  const double levels = max_level(n_bit);
  for (int trial = 0; trial < 50; ++trial) {
    // Tensors that contain both extrema exactly and keep every other sample
    // at least 0.2 levels away from a rounding tie.
    const Shape s = random_shape(rng, 6, 6);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    FeatureTensor v(s);
    for (std::size_t i = 0; i < v.size(); ++i) {
      double level;
      do {
        level = frac(rng) * levels;
      } while (std::abs(level - std::floor(level) - 0.5) < 0.2);
      v[i] = static_cast<float>(-1.0 + 3.0 * level / levels);
    }
    v[0] = -1.0f;
    if (v.size() > 1) v[v.size() - 1] = 2.0f;
    const auto q = quantize(v, n_bit);
    const auto again = quantize(dequantize(q), n_bit);
    ASSERT_EQ(again.data, q.data) << "trial " << trial;
  }
}

INSTANTIATE_TEST_SUITE_P(BitDepths, QlayerProperty, ::testing::Values(8, 10, 12));

}  // namespace
}  // namespace splitstream
