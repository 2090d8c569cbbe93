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
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "splitstream/byte_io.hpp"
#include "splitstream/error.hpp"

namespace splitstream {

/// Rows x cols x channels extent of an activation tensor.
struct Shape {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t channels = 1;

  std::size_t volume() const { return rows * cols * channels; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols) + "x" + std::to_string(s.channels);
}

/// A dense N x M x C tensor stored row-major with channels innermost:
/// element (n, m, c) lives at flat index (n * M + m) * C + c.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{}) : shape_(shape), data_(shape.volume(), fill) {
    require(shape.rows >= 1 && shape.cols >= 1 && shape.channels >= 1, ErrorKind::kShape,
            "tensor dimensions must be >= 1");
  }
  Tensor(Shape shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
    require(shape.rows >= 1 && shape.cols >= 1 && shape.channels >= 1, ErrorKind::kShape,
            "tensor dimensions must be >= 1");
    require(data_.size() == shape.volume(), ErrorKind::kShape, "data length != rows*cols*channels");
  }

  const Shape& shape() const { return shape_; }
  std::size_t rows() const { return shape_.rows; }
  std::size_t cols() const { return shape_.cols; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t size() const { return data_.size(); }

  std::size_t index(std::size_t n, std::size_t m, std::size_t c) const {
    return (n * shape_.cols + m) * shape_.channels + c;
  }
  T& at(std::size_t n, std::size_t m, std::size_t c) { return data_[index(n, m, c)]; }
  const T& at(std::size_t n, std::size_t m, std::size_t c) const { return data_[index(n, m, c)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  /// Same data viewed under a different shape of equal volume.
  Tensor reshaped(Shape s) const& { return Tensor(s, data_); }
  Tensor reshaped(Shape s) && { return Tensor(s, std::move(data_)); }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Tensor<U>(shape_, std::move(out));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_{};
  std::vector<T> data_;
};

/// Activation tensor at a split point; 32-bit in files and on the wire.
using FeatureTensor = Tensor<float>;

struct TensorStats {
  float min = 0.0f;
  float max = 0.0f;
};

/// Exact elementwise extrema. Rejects NaN/Inf with the offending index.
template <typename T>
TensorStats minmax(const Tensor<T>& v) {
  require(v.size() > 0, ErrorKind::kShape, "minmax of empty tensor");
  T lo = v[0];
  T hi = v[0];
  for (std::size_t i = 0; i < v.size(); ++i) {
    const T x = v[i];
    if (!std::isfinite(x)) fail(ErrorKind::kRange, "non-finite element at index " + std::to_string(i));
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  return {static_cast<float>(lo), static_cast<float>(hi)};
}

// ---------------------------------------------------------------------------
// FTEN file format: "FTEN", version u8 = 1, flags u8 = 0, reserved u16 = 0,
// N u32, M u32, C u32, then N*M*C f32 values (all little-endian).

inline constexpr std::uint8_t kFtenVersion = 1;
inline constexpr std::size_t kFtenHeaderBytes = 20;
// Upper bound on elements accepted from a file (4 GiB of payload).
inline constexpr std::uint64_t kFtenMaxElements = std::uint64_t{1} << 30;

inline std::vector<std::uint8_t> encode_tensor(const FeatureTensor& v) {
  ByteWriter w;
  w.buffer().reserve(kFtenHeaderBytes + 4 * v.size());
  w.tag("FTEN");
  w.u8(kFtenVersion);
  w.u8(0);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(v.rows()));
  w.u32(static_cast<std::uint32_t>(v.cols()));
  w.u32(static_cast<std::uint32_t>(v.channels()));
  for (float x : v.data()) w.f32(x);
  return w.take();
}

inline FeatureTensor decode_tensor(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < 4 || !r.tag("FTEN")) fail(ErrorKind::kFormat, "bad FTEN magic");
  const auto version = r.u8();
  if (version != kFtenVersion) fail(ErrorKind::kFormat, "unsupported FTEN version " + std::to_string(version));
  r.u8();
  r.u16();
  const std::uint64_t n = r.u32(), m = r.u32(), c = r.u32();
  if (n == 0 || m == 0 || c == 0) fail(ErrorKind::kFormat, "zero tensor dimension");
  if (n * m > kFtenMaxElements || n * m * c > kFtenMaxElements) {
    fail(ErrorKind::kFormat, "tensor dimensions overflow");
  }
  const std::size_t count = static_cast<std::size_t>(n * m * c);
  if (r.remaining() < 4 * count) {
    fail(ErrorKind::kTruncated, "FTEN payload has " + std::to_string(r.remaining()) + " bytes, need " +
                                    std::to_string(4 * count));
  }
  std::vector<float> data(count);
  for (auto& x : data) x = r.f32();
  return FeatureTensor({static_cast<std::size_t>(n), static_cast<std::size_t>(m), static_cast<std::size_t>(c)},
                       std::move(data));
}

/// Writes `v` to `out`; returns the number of bytes written.
inline std::size_t save_tensor(const FeatureTensor& v, std::ostream& out) {
  const auto bytes = encode_tensor(v);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "tensor write failed");
  return bytes.size();
}

inline FeatureTensor load_tensor(std::istream& in) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return decode_tensor(bytes);
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for " + path);
}

inline FeatureTensor load_tensor_file(const std::string& path) { return decode_tensor(read_file(path)); }
inline void save_tensor_file(const FeatureTensor& v, const std::string& path) { write_file(path, encode_tensor(v)); }

}  // namespace splitstream
