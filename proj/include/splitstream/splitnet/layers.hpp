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

// Layer vocabulary of the toy CNN engine plus per-layer forward and
// backward passes. Parameters are held in double; forward is templated on
// the activation type so inference can run at 32-bit while training and
// gradient checks run at 64-bit. Every loop has a fixed order, so a given
// input always yields bit-identical outputs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "splitstream/tensor.hpp"

namespace splitstream::splitnet {

enum class LayerKind : std::uint8_t {
  kConv = 0,
  kMaxPool = 1,
  kLeakyRelu = 2,
  kFlatten = 3,
  kDense = 4,
  kSoftmax = 5,
};

inline const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kMaxPool: return "maxpool";
    case LayerKind::kLeakyRelu: return "leaky_relu";
    case LayerKind::kFlatten: return "flatten";
    case LayerKind::kDense: return "dense";
    case LayerKind::kSoftmax: return "softmax";
  }
  return "?";
}

inline constexpr double kLeakySlope = 0.1;

struct Layer {
  LayerKind kind = LayerKind::kLeakyRelu;

  // conv
  std::size_t kernel = 0;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t stride = 1;
  bool same_padding = true;

  // dense
  std::size_t in_features = 0;
  std::size_t out_features = 0;

  // leaky_relu
  double slope = kLeakySlope;

  // conv: [out][ky][kx][in]; dense: [out][in]
  std::vector<double> weights;
  std::vector<double> bias;

  bool has_params() const { return kind == LayerKind::kConv || kind == LayerKind::kDense; }

  static Layer conv(std::size_t kernel, std::size_t in, std::size_t out, std::size_t stride = 1, bool same = true) {
    Layer l;
    l.kind = LayerKind::kConv;
    l.kernel = kernel;
    l.in_channels = in;
    l.out_channels = out;
    l.stride = stride;
    l.same_padding = same;
    l.weights.assign(out * kernel * kernel * in, 0.0);
    l.bias.assign(out, 0.0);
    return l;
  }
  static Layer dense(std::size_t in, std::size_t out) {
    Layer l;
    l.kind = LayerKind::kDense;
    l.in_features = in;
    l.out_features = out;
    l.weights.assign(out * in, 0.0);
    l.bias.assign(out, 0.0);
    return l;
  }
  static Layer simple(LayerKind kind) {
    Layer l;
    l.kind = kind;
    return l;
  }

  friend bool operator==(const Layer&, const Layer&) = default;
};

namespace detail {

struct ConvGeometry {
  std::size_t out_rows, out_cols;
  std::ptrdiff_t pad_top, pad_left;
};

inline ConvGeometry conv_geometry(const Layer& l, const Shape& in) {
  ConvGeometry g{};
  const auto k = static_cast<std::ptrdiff_t>(l.kernel);
  const auto s = static_cast<std::ptrdiff_t>(l.stride);
  if (l.same_padding) {
    g.out_rows = (in.rows + l.stride - 1) / l.stride;
    g.out_cols = (in.cols + l.stride - 1) / l.stride;
    const auto pr = std::max<std::ptrdiff_t>((static_cast<std::ptrdiff_t>(g.out_rows) - 1) * s + k -
                                                 static_cast<std::ptrdiff_t>(in.rows), 0);
    const auto pc = std::max<std::ptrdiff_t>((static_cast<std::ptrdiff_t>(g.out_cols) - 1) * s + k -
                                                 static_cast<std::ptrdiff_t>(in.cols), 0);
    g.pad_top = pr / 2;
    g.pad_left = pc / 2;
  } else {
    g.out_rows = (in.rows - l.kernel) / l.stride + 1;
    g.out_cols = (in.cols - l.kernel) / l.stride + 1;
    g.pad_top = g.pad_left = 0;
  }
  return g;
}

// Parameters viewed at activation precision without copying in the double case.
template <typename T>
class ParamView {
 public:
  explicit ParamView(const std::vector<double>& p) {
    if constexpr (std::is_same_v<T, double>) {
      ptr_ = p.data();
    } else {
      copy_.assign(p.begin(), p.end());
      ptr_ = copy_.data();
    }
  }
  const T* data() const { return ptr_; }

 private:
  std::vector<T> copy_;
  const T* ptr_ = nullptr;
};

}  // namespace detail

/// Output shape of `l` applied to `in`; throws kShape when they do not fit.
inline Shape output_shape(const Layer& l, const Shape& in) {
  switch (l.kind) {
    case LayerKind::kConv: {
      if (l.kernel == 0 || l.stride == 0) fail(ErrorKind::kShape, "conv kernel and stride must be >= 1");
      if (in.channels != l.in_channels) {
        fail(ErrorKind::kShape, "conv expects " + std::to_string(l.in_channels) + " input channels, got " +
                                    std::to_string(in.channels));
      }
      if (!l.same_padding && (in.rows < l.kernel || in.cols < l.kernel)) {
        fail(ErrorKind::kShape, "conv input smaller than kernel");
      }
      const auto g = detail::conv_geometry(l, in);
      return {g.out_rows, g.out_cols, l.out_channels};
    }
    case LayerKind::kMaxPool:
      if (in.rows < 2 || in.cols < 2) fail(ErrorKind::kShape, "maxpool input smaller than 2x2");
      return {in.rows / 2, in.cols / 2, in.channels};
    case LayerKind::kLeakyRelu:
    case LayerKind::kSoftmax:
      return in;
    case LayerKind::kFlatten:
      return {1, 1, in.volume()};
    case LayerKind::kDense:
      if (in.rows != 1 || in.cols != 1 || in.channels != l.in_features) {
        fail(ErrorKind::kShape, "dense expects 1x1x" + std::to_string(l.in_features) + ", got " + to_string(in));
      }
      return {1, 1, l.out_features};
  }
  fail(ErrorKind::kShape, "unknown layer kind");
}

/// Multiply-accumulate count of one application of `l` to `in`.
inline double layer_macs(const Layer& l, const Shape& in) {
  const Shape out = output_shape(l, in);
  switch (l.kind) {
    case LayerKind::kConv:
      return static_cast<double>(out.rows * out.cols * l.out_channels) *
             static_cast<double>(l.kernel * l.kernel * l.in_channels);
    case LayerKind::kDense:
      return static_cast<double>(l.in_features * l.out_features);
    case LayerKind::kMaxPool:
    case LayerKind::kLeakyRelu:
    case LayerKind::kSoftmax:
      return static_cast<double>(out.volume());
    case LayerKind::kFlatten:
      return 0.0;
  }
  return 0.0;
}

template <typename T>
Tensor<T> forward_layer(const Layer& l, const Tensor<T>& x) {
  const Shape in = x.shape();
  const Shape os = output_shape(l, in);
  switch (l.kind) {
    case LayerKind::kConv: {
      const auto g = detail::conv_geometry(l, in);
      const detail::ParamView<T> w(l.weights), b(l.bias);
      Tensor<T> y(os);
      const std::size_t k = l.kernel, ci = l.in_channels, co = l.out_channels;
      std::vector<T> acc(co);
      for (std::size_t oy = 0; oy < os.rows; ++oy) {
        for (std::size_t ox = 0; ox < os.cols; ++ox) {
          for (std::size_t o = 0; o < co; ++o) acc[o] = b.data()[o];
          for (std::size_t ky = 0; ky < k; ++ky) {
            const auto iy = static_cast<std::ptrdiff_t>(oy * l.stride + ky) - g.pad_top;
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in.rows)) continue;
            for (std::size_t kx = 0; kx < k; ++kx) {
              const auto ix = static_cast<std::ptrdiff_t>(ox * l.stride + kx) - g.pad_left;
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in.cols)) continue;
              const T* xp = &x.at(static_cast<std::size_t>(iy), static_cast<std::size_t>(ix), 0);
              for (std::size_t o = 0; o < co; ++o) {
                const T* wp = w.data() + ((o * k + ky) * k + kx) * ci;
                T s = T(0);
                for (std::size_t c = 0; c < ci; ++c) s += wp[c] * xp[c];
                acc[o] += s;
              }
            }
          }
          T* yp = &y.at(oy, ox, 0);
          for (std::size_t o = 0; o < co; ++o) yp[o] = acc[o];
        }
      }
      return y;
    }
    case LayerKind::kMaxPool: {
      Tensor<T> y(os);
      for (std::size_t oy = 0; oy < os.rows; ++oy)
        for (std::size_t ox = 0; ox < os.cols; ++ox)
          for (std::size_t c = 0; c < os.channels; ++c) {
            T m = x.at(2 * oy, 2 * ox, c);
            m = std::max(m, x.at(2 * oy, 2 * ox + 1, c));
            m = std::max(m, x.at(2 * oy + 1, 2 * ox, c));
            m = std::max(m, x.at(2 * oy + 1, 2 * ox + 1, c));
            y.at(oy, ox, c) = m;
          }
      return y;
    }
    case LayerKind::kLeakyRelu: {
      Tensor<T> y(os);
      const T slope = static_cast<T>(l.slope);
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : slope * x[i];
      return y;
    }
    case LayerKind::kFlatten:
      return x.reshaped(os);
    case LayerKind::kDense: {
      const detail::ParamView<T> w(l.weights), b(l.bias);
      Tensor<T> y(os);
      for (std::size_t o = 0; o < l.out_features; ++o) {
        const T* wp = w.data() + o * l.in_features;
        T s = b.data()[o];
        for (std::size_t i = 0; i < l.in_features; ++i) s += wp[i] * x[i];
        y[o] = s;
      }
      return y;
    }
    case LayerKind::kSoftmax: {
      // over channels at every spatial position
      Tensor<T> y(os);
      const std::size_t C = in.channels;
      for (std::size_t p = 0; p < in.rows * in.cols; ++p) {
        const T* xp = &x[p * C];
        T* yp = &y[p * C];
        const T m = *std::max_element(xp, xp + C);
        T z = T(0);
        for (std::size_t c = 0; c < C; ++c) z += (yp[c] = std::exp(xp[c] - m));
        for (std::size_t c = 0; c < C; ++c) yp[c] /= z;
      }
      return y;
    }
  }
  fail(ErrorKind::kShape, "unknown layer kind");
}

/// Parameter gradients of one layer (empty for parameter-free kinds).
struct LayerGrad {
  std::vector<double> weights;
  std::vector<double> bias;
};

inline LayerGrad zero_grad(const Layer& l) { return {std::vector<double>(l.weights.size(), 0.0), std::vector<double>(l.bias.size(), 0.0)}; }

/// Back-propagates `dy` through `l` evaluated at input `x`. Parameter
/// gradients are accumulated into `g`; the input gradient is returned.
inline Tensor<double> backward_layer(const Layer& l, const Tensor<double>& x, const Tensor<double>& dy,
                                     LayerGrad& g) {
  const Shape in = x.shape();
  const Shape os = output_shape(l, in);
  if (!(dy.shape() == os)) fail(ErrorKind::kShape, "upstream gradient shape " + to_string(dy.shape()) + " != " + to_string(os));
  Tensor<double> dx(in, 0.0);
  switch (l.kind) {
    case LayerKind::kConv: {
      const auto geo = detail::conv_geometry(l, in);
      const std::size_t k = l.kernel, ci = l.in_channels, co = l.out_channels;
      for (std::size_t oy = 0; oy < os.rows; ++oy) {
        for (std::size_t ox = 0; ox < os.cols; ++ox) {
          const double* gp = &dy.at(oy, ox, 0);
          for (std::size_t o = 0; o < co; ++o) g.bias[o] += gp[o];
          for (std::size_t ky = 0; ky < k; ++ky) {
            const auto iy = static_cast<std::ptrdiff_t>(oy * l.stride + ky) - geo.pad_top;
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(in.rows)) continue;
            for (std::size_t kx = 0; kx < k; ++kx) {
              const auto ix = static_cast<std::ptrdiff_t>(ox * l.stride + kx) - geo.pad_left;
              if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(in.cols)) continue;
              const auto uy = static_cast<std::size_t>(iy), ux = static_cast<std::size_t>(ix);
              const double* xp = &x.at(uy, ux, 0);
              double* dxp = &dx.at(uy, ux, 0);
              for (std::size_t o = 0; o < co; ++o) {
                const double go = gp[o];
                if (go == 0.0) continue;
                const std::size_t base = ((o * k + ky) * k + kx) * ci;
                const double* wp = l.weights.data() + base;
                double* gw = g.weights.data() + base;
                for (std::size_t c = 0; c < ci; ++c) {
                  gw[c] += go * xp[c];
                  dxp[c] += go * wp[c];
                }
              }
            }
          }
        }
      }
      return dx;
    }
    case LayerKind::kMaxPool: {
      for (std::size_t oy = 0; oy < os.rows; ++oy)
        for (std::size_t ox = 0; ox < os.cols; ++ox)
          for (std::size_t c = 0; c < os.channels; ++c) {
            // first maximum in scan order takes the gradient
            std::size_t by = 2 * oy, bx = 2 * ox;
            double m = x.at(by, bx, c);
            const std::size_t cand[3][2] = {{2 * oy, 2 * ox + 1}, {2 * oy + 1, 2 * ox}, {2 * oy + 1, 2 * ox + 1}};
            for (const auto& p : cand) {
              if (x.at(p[0], p[1], c) > m) {
                m = x.at(p[0], p[1], c);
                by = p[0];
                bx = p[1];
              }
            }
            dx.at(by, bx, c) += dy.at(oy, ox, c);
          }
      return dx;
    }
    case LayerKind::kLeakyRelu:
      for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : l.slope * dy[i];
      return dx;
    case LayerKind::kFlatten:
      return dy.reshaped(in);
    case LayerKind::kDense: {
      for (std::size_t o = 0; o < l.out_features; ++o) {
        const double go = dy[o];
        g.bias[o] += go;
        const double* wp = l.weights.data() + o * l.in_features;
        double* gw = g.weights.data() + o * l.in_features;
        for (std::size_t i = 0; i < l.in_features; ++i) {
          gw[i] += go * x[i];
          dx[i] += go * wp[i];
        }
      }
      return dx;
    }
    case LayerKind::kSoftmax: {
      const Tensor<double> y = forward_layer(l, x);
      const std::size_t C = in.channels;
      for (std::size_t p = 0; p < in.rows * in.cols; ++p) {
        double dot = 0.0;
        for (std::size_t c = 0; c < C; ++c) dot += dy[p * C + c] * y[p * C + c];
        for (std::size_t c = 0; c < C; ++c) dx[p * C + c] = y[p * C + c] * (dy[p * C + c] - dot);
      }
      return dx;
    }
  }
  fail(ErrorKind::kShape, "unknown layer kind");
}

}  // namespace splitstream::splitnet
