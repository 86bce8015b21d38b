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

#include "rail/diagnostics.hpp"

#include <cmath>

#include "rail/error.hpp"

namespace rail {

double DiagnosticsReport::mean_off_diagonal() const {
  const Eigen::Index n = correlation.rows();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) sum += correlation(i, j);
    }
  }
  return sum / static_cast<double>(n * (n - 1));
}

double pearson(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "pearson needs two vectors of equal, non-zero length");
  }
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  if (denom == 0.0) return 0.0;
  return ca.dot(cb) / denom;
}

DiagnosticsReport domain_prototype_diagnostics(const Adapter& adapter,
                                               const LabelRegistry& registry,
                                               std::span<const EmbeddingDataset> tests) {
  const auto& learned = adapter.learned_classes();
  DiagnosticsReport report;
  std::vector<std::vector<Eigen::Index>> columns;
  for (const auto& name : registry.domains()) {
    const ClassRange range = registry.domain_range(name);
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < learned.size(); ++j) {
      if (range.contains(learned[j])) cols.push_back(static_cast<Eigen::Index>(j));
    }
    if (cols.empty()) continue;
    report.domains.push_back(name);
    columns.push_back(std::move(cols));
  }
  const auto n = static_cast<Eigen::Index>(report.domains.size());
  if (n < 2) {
    throw Error(ErrorCode::kInsufficientDomains, "diagnostics need at least two learned domains");
  }
  if (tests.size() != report.domains.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected one test split per learned domain");
  }

  const Matrix weights = adapter.class_weights();
  Matrix prototypes(weights.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector sum = Vector::Zero(weights.rows());
    for (Eigen::Index c : columns[static_cast<std::size_t>(k)]) sum += weights.col(c);
    prototypes.col(k) = sum / static_cast<double>(columns[static_cast<std::size_t>(k)].size());
  }
  report.correlation.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    report.correlation(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double cc = pearson(prototypes.col(i), prototypes.col(j));
      report.correlation(i, j) = cc;
      report.correlation(j, i) = cc;
    }
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& test = tests[static_cast<std::size_t>(k)];
    const ClassRange range = registry.domain_range(report.domains[static_cast<std::size_t>(k)]);
    if (test.size() == 0) {
      report.in_domain_accuracy.push_back(0.0);
      continue;
    }
    const Matrix scores = adapter.predict(test.features);
    std::size_t hits = 0;
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      const ClassIndex c = learned[static_cast<std::size_t>(argmax_by_class(scores.row(r).transpose(), learned))];
      hits += range.contains(c) ? 1 : 0;
    }
    report.in_domain_accuracy.push_back(static_cast<double>(hits) / static_cast<double>(test.size()));
  }
  return report;
}

}  // namespace rail
