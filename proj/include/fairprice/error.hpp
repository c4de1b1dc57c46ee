// Copyright 2026 The fairprice Authors
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

namespace fairprice {

/// Failure categories. Each maps onto a stable CLI exit code.
enum class ErrorCode {
  invalid_argument,
  unknown_group,
  dimension_mismatch,
  io,
  parse,
  perfect_separation,
  rank_deficient,
  not_converged,
  singular_design,
  upward_sloping_demand,
  unenforceable_constraint,
  degenerate,
  missing_data,
  empty_group,
  no_qualifying_pairs,
  inapplicable,
  precondition,
  no_computable_metric,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::unknown_group: return "unknown_group";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
    case ErrorCode::perfect_separation: return "perfect_separation";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::singular_design: return "singular_design";
    case ErrorCode::upward_sloping_demand: return "upward_sloping_demand";
    case ErrorCode::unenforceable_constraint: return "unenforceable_constraint";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::missing_data: return "missing_data";
    case ErrorCode::empty_group: return "empty_group";
    case ErrorCode::no_qualifying_pairs: return "no_qualifying_pairs";
    case ErrorCode::inapplicable: return "inapplicable";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::no_computable_metric: return "no_computable_metric";
  }
  return "unknown";
}

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

// Literal messages bind here without building a std::string on the happy
// path; callers that concatenate a message test the condition themselves.
inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace fairprice
