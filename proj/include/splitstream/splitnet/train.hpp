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

// Training, evaluation and rate/accuracy sweeps.
//
// Compression-augmented training: on every forward pass the features at the
// split point are quantized, tiled, coded with a QP drawn uniformly from the
// menu (or losslessly), decoded and fed to the rest of the network. The
// backward pass treats that round trip as the identity.

#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "splitstream/metrics/bd_rate.hpp"
#include "splitstream/metrics/rate.hpp"
#include "splitstream/splitnet/dataset.hpp"
#include "splitstream/splitnet/parallel.hpp"
#include "splitstream/splitnet/split.hpp"

namespace splitstream::splitnet {

/// One menu entry: a QP, or nullopt for the lossless codec.
using QpChoice = std::optional<int>;

inline std::vector<QpChoice> default_qp_menu() { return {std::nullopt, 22, 27, 32, 37}; }

inline std::string to_string(const QpChoice& c) { return c ? std::to_string(*c) : "lossless"; }

enum class Optimizer { kMomentum, kAdam };

struct TrainConfig {
  Optimizer optimizer = Optimizer::kAdam;
  std::size_t split_index = 0;
  std::vector<QpChoice> qp_menu;  // empty: plain training, no codec in the loop
  int n_bit = 8;
  TileMode tiling = TileMode::kTiling;
  std::size_t epochs = 10;
  std::size_t batch_size = 16;
  double learning_rate = 0.002;
  double momentum = 0.9;
  // Cosine decay from learning_rate to learning_rate * final_lr_fraction.
  double final_lr_fraction = 0.05;
  std::uint64_t seed = 1;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double test_acc = -1.0;  // negative when no test set was given
};

struct TrainResult {
  Network net;
  std::vector<EpochLog> log;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

inline SplitPlan augmentation_plan(const TrainConfig& cfg, const QpChoice& choice) {
  return choice ? SplitPlan::lossy(cfg.split_index, *choice, cfg.n_bit, cfg.tiling)
                : SplitPlan::lossless(cfg.split_index, cfg.n_bit, cfg.tiling);
}

/// Fraction of `data` classified correctly by unsplit 32-bit inference.
inline double accuracy(const Network& net, const Dataset& data) {
  require(data.size() > 0, ErrorKind::kInvalidArgument, "empty dataset");
  std::vector<unsigned char> hit(data.size(), 0);
  parallel_for(data.size(), [&](std::size_t i) { hit[i] = argmax(forward(net, data.images[i])) == data.labels[i]; });
  return static_cast<double>(std::accumulate(hit.begin(), hit.end(), std::size_t{0})) / static_cast<double>(data.size());
}

/// Mini-batch Adam (or momentum SGD) on cross-entropy. Single-threaded and fully
/// determined by the config seed.
inline TrainResult train_augmented(Network net, const Dataset& train, const TrainConfig& cfg,
                                   const Dataset* test = nullptr) {
  validate(net);
  require(train.size() > 0 || cfg.epochs == 0, ErrorKind::kInvalidArgument, "empty training set");
  require(cfg.split_index <= net.size(), ErrorKind::kInvalidArgument, "split index past the last layer");
  require(cfg.batch_size >= 1, ErrorKind::kInvalidArgument, "batch size must be >= 1");
  for (const auto& c : cfg.qp_menu) check_plan(net, augmentation_plan(cfg, c));

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Gradients velocity = Gradients::zeros(net);  // momentum, or Adam first moment
  Gradients second = Gradients::zeros(net);    // Adam second moment
  std::size_t adam_t = 0;
  TrainResult result;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double progress = cfg.epochs > 1 ? static_cast<double>(epoch - 1) / static_cast<double>(cfg.epochs - 1) : 0.0;
    const double lr = cfg.learning_rate *
                      (cfg.final_lr_fraction + (1.0 - cfg.final_lr_fraction) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress)));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      Gradients batch = Gradients::zeros(net);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t idx = order[b];
        if (!(train.images[idx].shape() == net.input)) fail(ErrorKind::kShape, "training image shape mismatch");
        Activations<double> acts{train.images[idx].cast<double>()};
        acts.reserve(net.size() + 1);
        for (std::size_t i = 0; i < net.size(); ++i) {
          if (i == cfg.split_index && !cfg.qp_menu.empty()) {
            const QpChoice& c = cfg.qp_menu[rng() % cfg.qp_menu.size()];
            acts.back() = send_through(acts.back(), augmentation_plan(cfg, c));
          }
          acts.push_back(forward_layer(net.layers[i], acts.back()));
        }
        if (cfg.split_index == net.size() && !cfg.qp_menu.empty()) {
          const QpChoice& c = cfg.qp_menu[rng() % cfg.qp_menu.size()];
          acts.back() = send_through(acts.back(), augmentation_plan(cfg, c));
        }
        Tensor<double> g;
        loss_sum += cross_entropy(net, acts.back(), train.labels[idx], g);
        backward_from(net, acts, std::move(g), batch);
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      if (cfg.optimizer == Optimizer::kMomentum) {
        for (std::size_t l = 0; l < net.size(); ++l) {
          auto& v = velocity.layers[l];
          const auto& g = batch.layers[l];
          for (std::size_t j = 0; j < v.weights.size(); ++j) v.weights[j] = cfg.momentum * v.weights[j] + g.weights[j] * inv;
          for (std::size_t j = 0; j < v.bias.size(); ++j) v.bias[j] = cfg.momentum * v.bias[j] + g.bias[j] * inv;
        }
        sgd_step(net, velocity, lr);
      } else {
        ++adam_t;
        const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam_t));
        const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam_t));
        auto update = [&](std::vector<double>& m, std::vector<double>& v, const std::vector<double>& g,
                          std::vector<double>& step) {
          for (std::size_t j = 0; j < g.size(); ++j) {
            const double gj = g[j] * inv;
            m[j] = kAdamBeta1 * m[j] + (1.0 - kAdamBeta1) * gj;
            v[j] = kAdamBeta2 * v[j] + (1.0 - kAdamBeta2) * gj * gj;
            step[j] = (m[j] / c1) / (std::sqrt(v[j] / c2) + kAdamEpsilon);
          }
        };
        for (std::size_t l = 0; l < net.size(); ++l) {
          update(velocity.layers[l].weights, second.layers[l].weights, batch.layers[l].weights, batch.layers[l].weights);
          update(velocity.layers[l].bias, second.layers[l].bias, batch.layers[l].bias, batch.layers[l].bias);
        }
        sgd_step(net, batch, lr);
      }
    }
    EpochLog e;
    e.epoch = epoch;
    e.train_loss = loss_sum / static_cast<double>(train.size());
    if (test) {
      Network snapshot = net;
      narrow_to_f32(snapshot);
      e.test_acc = accuracy(snapshot, *test);
    }
    result.log.push_back(e);
  }
  narrow_to_f32(net);
  result.net = std::move(net);
  return result;
}

struct PlanResult {
  SplitPlan plan;
  double kbpi = 0.0;
  double accuracy = 0.0;
  double mean_bytes = 0.0;
};

/// Runs forward_split over the whole dataset.
inline PlanResult evaluate_plan(const Network& net, const Dataset& data, const SplitPlan& plan) {
  require(data.size() > 0, ErrorKind::kInvalidArgument, "empty dataset");
  check_plan(net, plan);
  std::vector<std::size_t> bytes(data.size());
  std::vector<unsigned char> hit(data.size(), 0);
  parallel_for(data.size(), [&](std::size_t i) {
    const SplitResult r = forward_split(net, data.images[i], plan);
    bytes[i] = r.transfer.total_bytes();
    hit[i] = argmax(r.output) == data.labels[i];
  });
  PlanResult pr;
  pr.plan = plan;
  pr.kbpi = metrics::kbpi_from_bytes(bytes, data.size());
  pr.accuracy = static_cast<double>(std::accumulate(hit.begin(), hit.end(), std::size_t{0})) / static_cast<double>(data.size());
  pr.mean_bytes = static_cast<double>(std::accumulate(bytes.begin(), bytes.end(), std::size_t{0})) / static_cast<double>(data.size());
  return pr;
}

inline metrics::RDCurve to_curve(const std::vector<PlanResult>& results) {
  metrics::RDCurve c;
  for (const auto& r : results) c.points.push_back({r.kbpi, r.accuracy});
  c.sort_by_rate();
  return c;
}

/// One (kbpi, accuracy) point per plan, sorted by rate.
inline metrics::RDCurve rd_sweep(const Network& net, const Dataset& data, const std::vector<SplitPlan>& plans) {
  require(!plans.empty(), ErrorKind::kInvalidArgument, "rd_sweep needs at least one plan");
  std::vector<PlanResult> results;
  for (const auto& p : plans) results.push_back(evaluate_plan(net, data, p));
  return to_curve(results);
}

}  // namespace splitstream::splitnet
