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

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "splitstream/error.hpp"

namespace splitstream::codec {

// MSB-first bit packer. The final partial byte is zero-padded.
class BitWriter {
 public:
  void put(std::uint64_t value, int nbits) {
    for (int i = nbits - 1; i >= 0; --i) put_bit(static_cast<unsigned>((value >> i) & 1u));
  }

  void put_bit(unsigned bit) {
    acc_ = static_cast<std::uint8_t>((acc_ << 1) | (bit & 1u));
    if (++fill_ == 8) {
      bytes_.push_back(acc_);
      acc_ = 0;
      fill_ = 0;
    }
  }

  // Order-k exponential-Golomb code of an unsigned value.
  void put_exp_golomb(std::uint32_t u, int k) {
    const std::uint64_t x = static_cast<std::uint64_t>(u) + (std::uint64_t{1} << k);
    const int n = std::bit_width(x) - 1;
    put(0, n - k);
    put(x, n + 1);
  }

  std::size_t bit_count() const { return bytes_.size() * 8 + static_cast<std::size_t>(fill_); }

  std::vector<std::uint8_t> finish() {
    if (fill_ > 0) {
      bytes_.push_back(static_cast<std::uint8_t>(acc_ << (8 - fill_)));
      acc_ = 0;
      fill_ = 0;
    }
    return std::move(bytes_);
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint8_t acc_ = 0;
  int fill_ = 0;
};

inline std::size_t exp_golomb_length(std::uint32_t u, int k) {
  const std::uint64_t x = static_cast<std::uint64_t>(u) + (std::uint64_t{1} << k);
  return static_cast<std::size_t>(2 * (std::bit_width(x) - 1) - k + 1);
}

// Bounds-checked MSB-first reader. Running off the end throws kTruncated.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  unsigned get_bit() {
    if (pos_ >= bytes_.size() * 8) fail(ErrorKind::kTruncated, "bitstream ended early");
    const unsigned bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
    ++pos_;
    return bit;
  }

  std::uint64_t get(int nbits) {
    std::uint64_t v = 0;
    for (int i = 0; i < nbits; ++i) v = (v << 1) | get_bit();
    return v;
  }

  std::uint32_t get_exp_golomb(int k) {
    int zeros = 0;
    while (get_bit() == 0) {
      if (++zeros > 31 - k) fail(ErrorKind::kCodec, "exp-Golomb prefix too long");
    }
    const std::uint64_t rest = get(zeros + k);
    const std::uint64_t x = (std::uint64_t{1} << (zeros + k)) | rest;
    return static_cast<std::uint32_t>(x - (std::uint64_t{1} << k));
  }

  std::size_t position() const { return pos_; }

  // After the last symbol only zero padding inside the final byte may remain.
  void expect_end() const {
    const std::size_t total = bytes_.size() * 8;
    if (total - pos_ >= 8) fail(ErrorKind::kCodec, "trailing bytes after payload");
    for (std::size_t p = pos_; p < total; ++p) {
      if ((bytes_[p >> 3] >> (7 - (p & 7))) & 1u) fail(ErrorKind::kCodec, "nonzero padding bits");
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

// Signed <-> unsigned folding: 0, -1, 1, -2, 2, ... -> 0, 1, 2, 3, 4, ...
inline std::uint32_t zigzag_fold(std::int32_t e) {
  return e >= 0 ? static_cast<std::uint32_t>(e) << 1 : (static_cast<std::uint32_t>(-(e + 1)) << 1) | 1u;
}

inline std::int32_t zigzag_unfold(std::uint32_t u) {
  return (u & 1u) ? -static_cast<std::int32_t>(u >> 1) - 1 : static_cast<std::int32_t>(u >> 1);
}

}  // namespace splitstream::codec
