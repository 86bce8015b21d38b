// Copyright 2026 The RAIL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAIL_ERROR_HPP_
#define RAIL_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rail {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kBadMagic,
  kBadFormat,
  kDimensionMismatch,
  kNonFiniteValue,
  kLabelOutOfRange,
  kDuplicateClassName,
  kUnknownDomain,
  kInfeasibleSeparation,
  kSingularSystem,
  kOverlappingLabels,
  kEmptyLabelSet,
  kEmptyGrid,
  kInsufficientDomains,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `row()` is set for per-row validation
// failures (NonFiniteValue, LabelOutOfRange).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> row = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> row_;
};

}  // namespace rail

#endif  // RAIL_ERROR_HPP_
