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

#include "rail/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rail/error.hpp"

namespace rail {

void MetricMatrix::validate() const {
  if (acc.rows() < 1 || acc.cols() < 1) throw Error(ErrorCode::kInvalidArgument, "empty metric matrix");
  if (static_cast<Eigen::Index>(domain_order.size()) != acc.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "one domain name per column required");
  }
  if (!((acc.array() >= 0.0).all() && (acc.array() <= 1.0).all())) {
    throw Error(ErrorCode::kInvalidArgument, "accuracies must lie in [0, 1]");
  }
}

Metrics compute_metrics(const MetricMatrix& matrix) {
  matrix.validate();
  const Matrix& acc = matrix.acc;
  const Eigen::Index steps = acc.rows();
  Metrics out;
  double upper_sum = 0.0;
  Eigen::Index upper_cells = 0;
  double average_sum = 0.0;
  double last_sum = 0.0;
  for (Eigen::Index j = 0; j < acc.cols(); ++j) {
    DomainMetrics d;
    d.domain = matrix.domain_order[static_cast<std::size_t>(j)];
    const Eigen::Index before = std::min(j, steps);
    if (before > 0) {
      const double column_sum = acc.col(j).head(before).sum();
      d.transfer = column_sum / static_cast<double>(before);
      upper_sum += column_sum;
      upper_cells += before;
    }
    d.average = acc.col(j).mean();
    d.last = acc(steps - 1, j);
    average_sum += d.average;
    last_sum += d.last;
    out.per_domain.push_back(std::move(d));
  }
  if (upper_cells > 0) out.transfer = upper_sum / static_cast<double>(upper_cells);
  out.average = average_sum / static_cast<double>(acc.cols());
  out.last = last_sum / static_cast<double>(acc.cols());
  return out;
}

std::string matrix_to_csv(const MetricMatrix& matrix) {
  std::ostringstream out;
  out << "step";
  for (const auto& name : matrix.domain_order) out << ',' << name;
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < matrix.acc.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < matrix.acc.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", matrix.acc(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

MetricMatrix matrix_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  MetricMatrix m;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::kBadFormat, "empty CSV");
  auto header = split(line);
  if (header.size() < 2) throw Error(ErrorCode::kBadFormat, "CSV header needs domain columns");
  m.domain_order.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size()) throw Error(ErrorCode::kBadFormat, "ragged CSV row");
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      try {
        row.push_back(std::stod(cells[c]));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kBadFormat, "bad number '" + cells[c] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  m.acc.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m.domain_order.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  m.validate();
  return m;
}

}  // namespace rail
