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

#include "rail/projection.hpp"

#include <cmath>
#include <random>
#include <string>

#include "rail/error.hpp"
#include "rail/random.hpp"

namespace rail {

void RhlParams::validate() const {
  if (input_dim < 1 || hidden_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "RHL dimensions must be positive");
  }
}

Matrix rhl_weight(const RhlParams& params) {
  params.validate();
  Rng rng(params.seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(params.input_dim)));
  Matrix w(params.input_dim, params.hidden_dim);
  for (int i = 0; i < params.input_dim; ++i) {
    for (int j = 0; j < params.hidden_dim; ++j) w(i, j) = normal(rng);
  }
  return w;
}

Matrix rhl_project(const Matrix& x, const RhlParams& params) {
  return FeatureMap::random_hidden_layer(params).project(x);
}

FeatureMap FeatureMap::identity(int dim) {
  if (dim < 1) throw Error(ErrorCode::kInvalidArgument, "feature dimension must be positive");
  FeatureMap map;
  map.input_dim_ = dim;
  map.output_dim_ = dim;
  return map;
}

FeatureMap FeatureMap::random_hidden_layer(const RhlParams& params) {
  FeatureMap map;
  map.weight_ = rhl_weight(params);
  map.input_dim_ = params.input_dim;
  map.output_dim_ = params.hidden_dim;
  map.rhl_ = params;
  return map;
}

Matrix FeatureMap::project(const Matrix& x) const {
  if (x.cols() != input_dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(input_dim_) +
                                                   " feature columns, got " +
                                                   std::to_string(x.cols()));
  }
  if (is_identity()) return x;
  Matrix h = x * weight_;
  switch (rhl_->activation) {
    case Activation::kRelu:
      h = h.cwiseMax(0.0);
      break;
  }
  return h;
}

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::kRbf ? "rbf" : "linear";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "rbf") return KernelKind::kRbf;
  if (name == "linear") return KernelKind::kLinear;
  throw Error(ErrorCode::kInvalidArgument, "unknown kernel '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::kRbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    throw Error(ErrorCode::kInvalidArgument, "rbf gamma must be positive");
  }
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelSpec& spec) {
  spec.validate();
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "kernel operands have " + std::to_string(a.cols()) +
                                                   " and " + std::to_string(b.cols()) +
                                                   " columns");
  }
  // Row-major copies give contiguous rows for the pairwise loops.
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor ar = a;
  const RowMajor br = b;
  const Eigen::Index d = a.cols();
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < br.rows(); ++j) {
    const double* bj = br.data() + j * d;
    for (Eigen::Index i = 0; i < ar.rows(); ++i) {
      const double* ai = ar.data() + i * d;
      double acc = 0.0;
      if (spec.kind == KernelKind::kRbf) {
        for (Eigen::Index t = 0; t < d; ++t) {
          const double diff = ai[t] - bj[t];
          acc += diff * diff;
        }
        k(i, j) = std::exp(-spec.gamma * acc);
      } else {
        for (Eigen::Index t = 0; t < d; ++t) acc += ai[t] * bj[t];
        k(i, j) = acc;
      }
    }
  }
  return k;
}

}  // namespace rail
