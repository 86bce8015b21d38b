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

#ifndef RAIL_REPORT_HPP_
#define RAIL_REPORT_HPP_

#include <string>
#include <string_view>

#include "rail/metrics.hpp"
#include "rail/protocol.hpp"

namespace rail {

// JSON mirroring RunConfig. Unknown keys are rejected; missing keys keep
// their defaults.
std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(std::string_view text, RunConfig base = {});

std::string metrics_to_json(const Metrics& metrics);

// Config echo, domain order, matrix, zero-shot accuracies, metrics and the
// hyperparameters used. Contains nothing run-dependent beyond the inputs, so
// equal inputs give byte-identical output.
std::string result_to_json(const RunConfig& config, const RunResult& result);

}  // namespace rail

#endif  // RAIL_REPORT_HPP_
