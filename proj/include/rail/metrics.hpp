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

#ifndef RAIL_METRICS_HPP_
#define RAIL_METRICS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rail/types.hpp"

namespace rail {

// acc(i, j): accuracy on domain j's test set after learning step i.
struct MetricMatrix {
  Matrix acc;
  std::vector<std::string> domain_order;

  // Non-empty, entries in [0, 1], one name per column.
  void validate() const;
};

struct DomainMetrics {
  std::string domain;
  std::optional<double> transfer;  // absent for the first domain
  double average = 0.0;
  double last = 0.0;
};

struct Metrics {
  std::optional<double> transfer;
  double average = 0.0;
  double last = 0.0;
  std::vector<DomainMetrics> per_domain;
};

// Per domain j: transfer = mean of acc(i, j) over steps i < j, average = mean
// of the whole column, last = acc(final step, j).
//
// Aggregates: average and last are the means of the per-domain values;
// transfer is the mean over every cell above the diagonal (for a square
// 3x3 matrix: the mean of acc(0,1), acc(0,2) and acc(1,2)).
Metrics compute_metrics(const MetricMatrix& matrix);

// Header row of domain names, then one row per step.
std::string matrix_to_csv(const MetricMatrix& matrix);
MetricMatrix matrix_from_csv(std::string_view csv);

}  // namespace rail

#endif  // RAIL_METRICS_HPP_
