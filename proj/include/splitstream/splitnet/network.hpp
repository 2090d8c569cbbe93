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
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "splitstream/byte_io.hpp"
#include "splitstream/splitnet/layers.hpp"

namespace splitstream::splitnet {

struct Network {
  Shape input{};
  std::size_t classes = 0;
  std::vector<Layer> layers;

  std::size_t size() const { return layers.size(); }
  bool ends_with_softmax() const { return !layers.empty() && layers.back().kind == LayerKind::kSoftmax; }

  /// Output shape after each layer; entry 0 is the input shape.
  std::vector<Shape> shapes() const {
    std::vector<Shape> s{input};
    for (const auto& l : layers) s.push_back(output_shape(l, s.back()));
    return s;
  }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Checks the shape chain and parameter sizes; the net must end in 1x1xclasses.
inline void validate(const Network& net) {
  require(!net.layers.empty(), ErrorKind::kShape, "network has no layers");
  require(net.classes >= 1, ErrorKind::kShape, "network needs at least one class");
  Shape s = net.input;
  require(s.rows >= 1 && s.cols >= 1 && s.channels >= 1, ErrorKind::kShape, "bad input shape");
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const Layer& l = net.layers[i];
    s = output_shape(l, s);
    std::size_t nw = 0, nb = 0;
    if (l.kind == LayerKind::kConv) {
      nw = l.out_channels * l.kernel * l.kernel * l.in_channels;
      nb = l.out_channels;
    } else if (l.kind == LayerKind::kDense) {
      nw = l.out_features * l.in_features;
      nb = l.out_features;
    }
    if (l.weights.size() != nw || l.bias.size() != nb) {
      fail(ErrorKind::kShape, "layer " + std::to_string(i + 1) + " has wrong parameter count");
    }
  }
  if (!(s == Shape{1, 1, net.classes})) {
    fail(ErrorKind::kShape, "network output is " + to_string(s) + ", expected 1x1x" + std::to_string(net.classes));
  }
}

/// Activations of a forward pass: acts[0] is the input, acts[i] the output of layer i.
template <typename T>
using Activations = std::vector<Tensor<T>>;

/// Runs layers [first, last) starting from `x`; returns their outputs in order.
template <typename T>
Activations<T> run_layers(const Network& net, Tensor<T> x, std::size_t first, std::size_t last) {
  Activations<T> out;
  out.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    x = forward_layer(net.layers[i], x);
    out.push_back(x);
  }
  return out;
}

template <typename T>
Activations<T> forward_all(const Network& net, const Tensor<T>& input) {
  if (!(input.shape() == net.input)) {
    fail(ErrorKind::kShape, "input is " + to_string(input.shape()) + ", network expects " + to_string(net.input));
  }
  Activations<T> acts{input};
  auto rest = run_layers(net, input, 0, net.size());
  for (auto& a : rest) acts.push_back(std::move(a));
  return acts;
}

/// Network output (logits, or probabilities if the last layer is softmax).
template <typename T>
Tensor<T> forward(const Network& net, const Tensor<T>& input) {
  if (!(input.shape() == net.input)) {
    fail(ErrorKind::kShape, "input is " + to_string(input.shape()) + ", network expects " + to_string(net.input));
  }
  Tensor<T> x = input;
  for (const auto& l : net.layers) x = forward_layer(l, x);
  return x;
}

template <typename T>
std::size_t argmax(const Tensor<T>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

// ---------------------------------------------------------------------------
// Loss and gradients

struct Gradients {
  std::vector<LayerGrad> layers;

  static Gradients zeros(const Network& net) {
    Gradients g;
    for (const auto& l : net.layers) g.layers.push_back(zero_grad(l));
    return g;
  }
  void scale(double s) {
    for (auto& l : layers) {
      for (auto& v : l.weights) v *= s;
      for (auto& v : l.bias) v *= s;
    }
  }
};

/// Cross-entropy against class `target`. If the net ends in softmax the
/// output is taken as probabilities, otherwise as logits. Returns the loss
/// and writes d(loss)/d(output) into `grad_out`.
inline double cross_entropy(const Network& net, const Tensor<double>& output, std::size_t target,
                            Tensor<double>& grad_out) {
  require(target < output.size(), ErrorKind::kInvalidArgument, "target class out of range");
  grad_out = Tensor<double>(output.shape(), 0.0);
  if (net.ends_with_softmax()) {
    const double p = std::max(output[target], 1e-300);
    grad_out[target] = -1.0 / p;
    return -std::log(p);
  }
  double m = output[0];
  for (std::size_t i = 1; i < output.size(); ++i) m = std::max(m, output[i]);
  double z = 0.0;
  for (std::size_t i = 0; i < output.size(); ++i) z += std::exp(output[i] - m);
  for (std::size_t i = 0; i < output.size(); ++i) grad_out[i] = std::exp(output[i] - m) / z;
  grad_out[target] -= 1.0;
  return -(output[target] - m - std::log(z));
}

/// Back-propagates `grad_out` through a recorded forward pass, accumulating
/// into `grads`.
inline void backward_from(const Network& net, const Activations<double>& acts, Tensor<double> grad_out,
                          Gradients& grads) {
  require(acts.size() == net.size() + 1, ErrorKind::kShape, "activation record does not match network");
  for (std::size_t i = net.size(); i-- > 0;) grad_out = backward_layer(net.layers[i], acts[i], grad_out, grads.layers[i]);
}

/// Cross-entropy gradients of all parameters for one labelled sample.
inline Gradients backward(const Network& net, const Tensor<double>& input, std::size_t target, double* loss = nullptr) {
  const auto acts = forward_all(net, input);
  Tensor<double> g;
  const double l = cross_entropy(net, acts.back(), target, g);
  if (loss) *loss = l;
  Gradients grads = Gradients::zeros(net);
  backward_from(net, acts, std::move(g), grads);
  return grads;
}

inline void sgd_step(Network& net, const Gradients& grads, double lr) {
  require(grads.layers.size() == net.size(), ErrorKind::kShape, "gradient/network layer count mismatch");
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto& l = net.layers[i];
    const auto& g = grads.layers[i];
    require(g.weights.size() == l.weights.size() && g.bias.size() == l.bias.size(), ErrorKind::kShape,
            "gradient/parameter size mismatch");
    for (std::size_t j = 0; j < l.weights.size(); ++j) l.weights[j] -= lr * g.weights[j];
    for (std::size_t j = 0; j < l.bias.size(); ++j) l.bias[j] -= lr * g.bias[j];
  }
}

// ---------------------------------------------------------------------------
// Construction

/// Rounds every parameter to the nearest f32 so in-memory and on-disk nets agree.
inline void narrow_to_f32(Network& net) {
  for (auto& l : net.layers) {
    for (auto& w : l.weights) w = static_cast<float>(w);
    for (auto& b : l.bias) b = static_cast<float>(b);
    if (l.kind == LayerKind::kLeakyRelu) l.slope = static_cast<float>(l.slope);
  }
}

/// He-normal weights, zero biases, from a seeded generator.
inline void init_weights(Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& l : net.layers) {
    double fan_in = 0.0;
    if (l.kind == LayerKind::kConv) fan_in = static_cast<double>(l.kernel * l.kernel * l.in_channels);
    if (l.kind == LayerKind::kDense) fan_in = static_cast<double>(l.in_features);
    if (fan_in == 0.0) continue;
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
    for (auto& w : l.weights) w = dist(rng);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
  narrow_to_f32(net);
}

/// conv3x3x8 - leaky - pool - conv3x3x16 - leaky - pool - conv3x3x16 - leaky -
/// pool - flatten - dense over a 32x32x1 input. Outputs logits (softmax is
/// folded into the loss). Pool outputs sit at layer indices 3, 6 and 9.
inline Network reference_net(std::uint64_t seed, std::size_t classes = 3) {
  Network net;
  net.input = {32, 32, 1};
  net.classes = classes;
  net.layers = {
      Layer::conv(3, 1, 8),   Layer::simple(LayerKind::kLeakyRelu), Layer::simple(LayerKind::kMaxPool),
      Layer::conv(3, 8, 16),  Layer::simple(LayerKind::kLeakyRelu), Layer::simple(LayerKind::kMaxPool),
      Layer::conv(3, 16, 16), Layer::simple(LayerKind::kLeakyRelu), Layer::simple(LayerKind::kMaxPool),
      Layer::simple(LayerKind::kFlatten), Layer::dense(4 * 4 * 16, classes),
  };
  init_weights(net, seed);
  validate(net);
  return net;
}

// ---------------------------------------------------------------------------
// SNET file: "SNET", version u8 = 1, 3 reserved bytes, input N/M/C u32,
// classes u32, layer count u32, then per layer a kind u8 and its fields:
//   conv     kernel, in, out, stride u32; same-padding u8; weights f32[]; bias f32[]
//   maxpool  window u32 (2), stride u32 (2)
//   leaky    slope f32
//   dense    in, out u32; weights f32[]; bias f32[]
//   flatten, softmax: nothing
// All little-endian.

inline constexpr std::uint8_t kSnetVersion = 1;

inline std::vector<std::uint8_t> encode_network(const Network& net) {
  validate(net);
  ByteWriter w;
  w.tag("SNET");
  w.u8(kSnetVersion);
  w.u8(0);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(net.input.rows));
  w.u32(static_cast<std::uint32_t>(net.input.cols));
  w.u32(static_cast<std::uint32_t>(net.input.channels));
  w.u32(static_cast<std::uint32_t>(net.classes));
  w.u32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers) {
    w.u8(static_cast<std::uint8_t>(l.kind));
    switch (l.kind) {
      case LayerKind::kConv:
        w.u32(static_cast<std::uint32_t>(l.kernel));
        w.u32(static_cast<std::uint32_t>(l.in_channels));
        w.u32(static_cast<std::uint32_t>(l.out_channels));
        w.u32(static_cast<std::uint32_t>(l.stride));
        w.u8(l.same_padding ? 1 : 0);
        break;
      case LayerKind::kMaxPool:
        w.u32(2);
        w.u32(2);
        break;
      case LayerKind::kLeakyRelu:
        w.f32(static_cast<float>(l.slope));
        break;
      case LayerKind::kDense:
        w.u32(static_cast<std::uint32_t>(l.in_features));
        w.u32(static_cast<std::uint32_t>(l.out_features));
        break;
      case LayerKind::kFlatten:
      case LayerKind::kSoftmax:
        break;
    }
    for (double v : l.weights) w.f32(static_cast<float>(v));
    for (double v : l.bias) w.f32(static_cast<float>(v));
  }
  return w.take();
}

inline Network decode_network(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || !r.tag("SNET")) fail(ErrorKind::kFormat, "bad SNET magic");
  const auto version = r.u8();
  if (version != kSnetVersion) fail(ErrorKind::kFormat, "unsupported SNET version " + std::to_string(version));
  r.u8();
  r.u16();
  Network net;
  net.input.rows = r.u32();
  net.input.cols = r.u32();
  net.input.channels = r.u32();
  net.classes = r.u32();
  const std::uint32_t count = r.u32();
  if (count == 0 || count > 4096) fail(ErrorKind::kFormat, "implausible layer count");
  auto read_params = [&](std::vector<double>& dst, std::uint64_t n) {
    if (n > r.remaining() / 4) fail(ErrorKind::kTruncated, "SNET parameters truncated");
    dst.resize(static_cast<std::size_t>(n));
    for (auto& v : dst) v = r.f32();
  };
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(LayerKind::kSoftmax)) {
      fail(ErrorKind::kFormat, "unknown layer kind " + std::to_string(kind));
    }
    Layer l;
    l.kind = static_cast<LayerKind>(kind);
    switch (l.kind) {
      case LayerKind::kConv: {
        l.kernel = r.u32();
        l.in_channels = r.u32();
        l.out_channels = r.u32();
        l.stride = r.u32();
        l.same_padding = r.u8() != 0;
        const std::uint64_t nw = std::uint64_t{l.out_channels} * l.kernel * l.kernel * l.in_channels;
        read_params(l.weights, nw);
        read_params(l.bias, l.out_channels);
        break;
      }
      case LayerKind::kMaxPool:
        if (r.u32() != 2 || r.u32() != 2) fail(ErrorKind::kFormat, "only 2x2/2 max-pooling is supported");
        break;
      case LayerKind::kLeakyRelu:
        l.slope = r.f32();
        break;
      case LayerKind::kDense:
        l.in_features = r.u32();
        l.out_features = r.u32();
        read_params(l.weights, std::uint64_t{l.in_features} * l.out_features);
        read_params(l.bias, l.out_features);
        break;
      case LayerKind::kFlatten:
      case LayerKind::kSoftmax:
        break;
    }
    net.layers.push_back(std::move(l));
  }
  if (r.remaining() != 0) fail(ErrorKind::kFormat, "trailing bytes after SNET layers");
  try {
    validate(net);
  } catch (const Error& e) {
    fail(ErrorKind::kFormat, std::string("inconsistent SNET model: ") + e.what());
  }
  return net;
}

inline Network load_network_file(const std::string& path) { return decode_network(read_file(path)); }
inline void save_network_file(const Network& net, const std::string& path) { write_file(path, encode_network(net)); }

}  // namespace splitstream::splitnet
