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

#include "rail/error.hpp"

namespace rail {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kDuplicateClassName: return "DuplicateClassName";
    case ErrorCode::kUnknownDomain: return "UnknownDomain";
    case ErrorCode::kInfeasibleSeparation: return "InfeasibleSeparation";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kOverlappingLabels: return "OverlappingLabels";
    case ErrorCode::kEmptyLabelSet: return "EmptyLabelSet";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kInsufficientDomains: return "InsufficientDomains";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message) {
  std::string out(to_string(code));
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> row)
    : std::runtime_error(format_message(code, message)), code_(code), detail_(message), row_(row) {}

}  // namespace rail
