// Copyright 2026 The lidargen Authors
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
#include <string_view>

namespace lidargen {

enum class ErrorCode {
  kInvalidInput,
  kDomain,          // value outside the documented input domain
  kShapeMismatch,
  kLookup,          // unknown node / id
  kSchema,          // malformed JSON document or record
  kBadMagic,
  kUnsupportedVersion,
  kTruncated,
  kCountMismatch,
  kIo,
  kNumeric,
  kDegenerate,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kDomain: return "domain_error";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kLookup: return "lookup_error";
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kTruncated: return "truncated_payload";
    case ErrorCode::kCountMismatch: return "count_mismatch";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kNumeric: return "numeric_error";
    case ErrorCode::kDegenerate: return "degenerate_geometry";
  }
  return "unknown";
}

/// The single exception type thrown by the library. The code is stable and
/// machine readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace lidargen
