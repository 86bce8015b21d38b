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

#ifndef RAIL_PROJECTION_HPP_
#define RAIL_PROJECTION_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "rail/types.hpp"

namespace rail {

enum class Activation { kRelu };

// Randomly-initialized hidden layer. Only these parameters are ever
// persisted; the weight matrix is regenerated from them.
struct RhlParams {
  std::uint64_t seed = 0;
  int input_dim = 0;
  int hidden_dim = 0;
  Activation activation = Activation::kRelu;

  void validate() const;
  bool operator==(const RhlParams&) const = default;
};

// input_dim x hidden_dim, entries i.i.d. N(0, 1/input_dim). Pure function of
// the parameters.
Matrix rhl_weight(const RhlParams& params);

// relu(x * weight). Throws DimensionMismatch if x.cols() != input_dim.
Matrix rhl_project(const Matrix& x, const RhlParams& params);

// The fixed feature map phi(.) in front of the primal ridge solve: either the
// identity or an RHL with its weight generated once.
class FeatureMap {
 public:
  static FeatureMap identity(int dim);
  static FeatureMap random_hidden_layer(const RhlParams& params);

  Matrix project(const Matrix& x) const;

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  bool is_identity() const { return !rhl_.has_value(); }
  const std::optional<RhlParams>& rhl() const { return rhl_; }

 private:
  FeatureMap() = default;

  int input_dim_ = 0;
  int output_dim_ = 0;
  std::optional<RhlParams> rhl_;
  Matrix weight_;
};

enum class KernelKind { kRbf, kLinear };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::kRbf;
  double gamma = 1.0;  // rbf bandwidth; ignored for linear

  static KernelSpec rbf(double gamma) { return {KernelKind::kRbf, gamma}; }
  static KernelSpec linear() { return {KernelKind::kLinear, 1.0}; }

  void validate() const;
  bool operator==(const KernelSpec&) const = default;
};

// K[i][j] = exp(-gamma * |a_i - b_j|^2) or a_i . b_j.
//
// Entries are evaluated pair by pair with a fixed summation order, so a block
// of a Gram matrix is bit-identical to the same block computed on its own,
// K(a, a) is exactly symmetric and the rbf diagonal is exactly one.
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const KernelSpec& spec);

}  // namespace rail

#endif  // RAIL_PROJECTION_HPP_
