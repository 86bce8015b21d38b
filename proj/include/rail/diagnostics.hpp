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

#ifndef RAIL_DIAGNOSTICS_HPP_
#define RAIL_DIAGNOSTICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "rail/adapter.hpp"
#include "rail/embedding_store.hpp"

namespace rail {

struct DiagnosticsReport {
  std::vector<std::string> domains;  // learned domains, registry order
  Matrix correlation;                // Pearson CC between domain prototypes
  std::vector<double> in_domain_accuracy;

  // Mean of the off-diagonal entries of `correlation`.
  double mean_off_diagonal() const;
};

// Pearson correlation of two equally sized vectors; 0 when either is constant.
double pearson(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

// Domain prototype = mean of that domain's class weight columns. In-domain
// accuracy of domain k = fraction of tests[k] whose adapter prediction (over
// C_L) falls inside domain k. `tests` follows the order of the learned
// domains. Throws InsufficientDomains when fewer than two domains are learned.
DiagnosticsReport domain_prototype_diagnostics(const Adapter& adapter,
                                               const LabelRegistry& registry,
                                               std::span<const EmbeddingDataset> tests);

}  // namespace rail

#endif  // RAIL_DIAGNOSTICS_HPP_
