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

#include <stdexcept>
#include <string>

namespace splitstream {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kInvalidArgument,  // caller passed something outside the contract
  kFormat,           // bad magic, unknown version, malformed header
  kTruncated,        // stream ended before the declared payload
  kIntegrity,        // CRC mismatch
  kRange,            // sample or parameter outside its legal range
  kShape,            // tensor/layout dimension mismatch
  kCodec,            // payload decodes to something inconsistent
  kNonOverlap,       // RD curves share no quality interval
  kDegenerate,       // ill-posed fit (duplicate qualities, too few points)
  kIo,               // filesystem failure
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kTruncated: return "truncated input";
    case ErrorKind::kIntegrity: return "integrity error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kShape: return "shape mismatch";
    case ErrorKind::kCodec: return "codec error";
    case ErrorKind::kNonOverlap: return "non-overlapping curves";
    case ErrorKind::kDegenerate: return "degenerate input";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) fail(kind, what);
}

}  // namespace splitstream
