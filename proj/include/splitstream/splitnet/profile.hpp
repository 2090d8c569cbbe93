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

// Per-layer data volume / cumulative compute profile and latency-optimal
// split selection.

#pragma once

#include <limits>
#include <vector>

#include "splitstream/splitnet/network.hpp"

namespace splitstream::splitnet {

struct LayerCost {
  LayerKind kind{};
  std::size_t output_volume = 0;
  double macs = 0.0;
  double cum_cost = 0.0;  // cumulative MACs through this layer / total
};

struct LayerProfile {
  std::size_t input_volume = 0;
  double total_macs = 0.0;
  std::vector<LayerCost> layers;

  /// Samples crossing the boundary when splitting after layer `split` (0 = input).
  std::size_t volume_at(std::size_t split) const {
    return split == 0 ? input_volume : layers.at(split - 1).output_volume;
  }
  /// MACs executed on the mobile side for split point `split`.
  double macs_before(std::size_t split) const {
    double m = 0.0;
    for (std::size_t i = 0; i < split; ++i) m += layers[i].macs;
    return m;
  }
};

inline LayerProfile layer_profile(const Network& net) {
  validate(net);
  LayerProfile p;
  p.input_volume = net.input.volume();
  Shape s = net.input;
  for (const auto& l : net.layers) {
    LayerCost c;
    c.kind = l.kind;
    c.macs = layer_macs(l, s);
    s = output_shape(l, s);
    c.output_volume = s.volume();
    p.total_macs += c.macs;
    p.layers.push_back(c);
  }
  double run = 0.0;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    run += p.layers[i].macs;
    p.layers[i].cum_cost = p.total_macs > 0.0 ? run / p.total_macs : static_cast<double>(i + 1) / p.layers.size();
  }
  if (!p.layers.empty()) p.layers.back().cum_cost = 1.0;
  return p;
}

struct LinkModel {
  double mobile_seconds_per_mac = 0.0;
  double cloud_seconds_per_mac = 0.0;
  double uplink_bits_per_second = 0.0;
  double bits_per_sample = 32.0;
};

/// End-to-end latency of splitting after layer `split`:
/// mobile compute + upload of the boundary tensor + cloud compute.
inline double split_latency(const LayerProfile& p, const LinkModel& link, std::size_t split) {
  const double front = p.macs_before(split);
  const double transfer = static_cast<double>(p.volume_at(split)) * link.bits_per_sample / link.uplink_bits_per_second;
  return link.mobile_seconds_per_mac * front + transfer + link.cloud_seconds_per_mac * (p.total_macs - front);
}

/// Exhaustive latency minimisation over split points 0..L; ties go to the
/// earlier split.
inline std::size_t choose_split(const LayerProfile& p, const LinkModel& link) {
  require(link.mobile_seconds_per_mac > 0.0 && link.cloud_seconds_per_mac > 0.0 &&
              link.uplink_bits_per_second > 0.0 && link.bits_per_sample > 0.0,
          ErrorKind::kInvalidArgument, "link model rates must be positive");
  std::size_t best = 0;
  double best_t = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= p.layers.size(); ++k) {
    const double t = split_latency(p, link, k);
    if (t < best_t) {
      best_t = t;
      best = k;
    }
  }
  return best;
}

}  // namespace splitstream::splitnet
