// Copyright 2026 The ffslab Authors.
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

namespace ffslab {

enum class ErrorCode {
  kNotPrime,
  kReducible,
  kSizeBudgetExceeded,
  kBadSubfield,
  kDimensionMismatch,
  kArityMismatch,
  kDegreeBudgetExceeded,
  kNotDivisible,
  kHypothesisViolated,
  kNotPermutation,
  kDependentBasis,
  kBaseNotPrime,
  kEmptyOrbitWindow,
  kConfigError,
  kInvalidArgument,
  kOverflow,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kReducible: return "Reducible";
    case ErrorCode::kSizeBudgetExceeded: return "SizeBudgetExceeded";
    case ErrorCode::kBadSubfield: return "BadSubfield";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kArityMismatch: return "ArityMismatch";
    case ErrorCode::kDegreeBudgetExceeded: return "DegreeBudgetExceeded";
    case ErrorCode::kNotDivisible: return "NotDivisible";
    case ErrorCode::kHypothesisViolated: return "HypothesisViolated";
    case ErrorCode::kNotPermutation: return "NotPermutation";
    case ErrorCode::kDependentBasis: return "DependentBasis";
    case ErrorCode::kBaseNotPrime: return "BaseNotPrime";
    case ErrorCode::kEmptyOrbitWindow: return "EmptyOrbitWindow";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOverflow: return "Overflow";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ffslab
