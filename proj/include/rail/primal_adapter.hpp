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

#ifndef RAIL_PRIMAL_ADAPTER_HPP_
#define RAIL_PRIMAL_ADAPTER_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "rail/adapter.hpp"
#include "rail/projection.hpp"

namespace rail {

// Primal ridge classifier over projected features Phi = phi(X).
//
// Keeps the weights W (D x |C_L|) and the memory M = (Phi^T Phi + lambda I)^-1
// over everything learned so far. A new domain updates M with the Woodbury
// identity, which only factorizes an n_new x n_new system:
//
//   M' = M - M Phi^T (I + Phi M Phi^T)^-1 Phi M
//   W' = [ W - M' Phi^T Phi W ,  M' Phi^T Y ]
//
// After any number of domains (W, M) equal the ridge solution on the pooled
// data up to round-off.
class PrimalAdapter final : public Adapter {
 public:
  // lambda >= 0; lambda = 0 is accepted while Phi^T Phi stays invertible.
  PrimalAdapter(FeatureMap map, double lambda, TargetMode targets = TargetMode::kOneHot);

  void learn(const Matrix& features, std::span<const ClassIndex> labels,
             std::span<const ClassIndex> classes, const Matrix& class_text = Matrix()) override;

  // Closed-form solve on the first domain. Throws SingularSystem when the
  // regularized Gram matrix cannot be factorized.
  void init(const Matrix& features, std::span<const ClassIndex> labels,
            std::span<const ClassIndex> classes, const Matrix& class_text = Matrix());
  // Recursive update with a domain of new classes (OverlappingLabels
  // otherwise).
  void update(const Matrix& features, std::span<const ClassIndex> labels,
              std::span<const ClassIndex> classes, const Matrix& class_text = Matrix());

  Matrix predict(const Matrix& features) const override;
  Matrix class_weights() const override { return weights_; }
  const std::vector<ClassIndex>& learned_classes() const override { return learned_; }
  int input_dim() const override { return map_.input_dim(); }

  const Matrix& weights() const { return weights_; }
  const Matrix& memory() const { return memory_; }
  double lambda() const { return lambda_; }
  const FeatureMap& feature_map() const { return map_; }
  TargetMode target_mode() const { return targets_; }
  const Matrix& class_text() const { return class_text_; }

  // Binary checkpoint: lambda, feature-map parameters, learned classes, W, M
  // (and class text rows in text mode). Weights of the RHL are regenerated.
  void save(const std::filesystem::path& path) const;
  static PrimalAdapter load(const std::filesystem::path& path);

 private:
  void append_class_text(const Matrix& class_text, std::size_t n_classes);

  FeatureMap map_;
  double lambda_;
  TargetMode targets_;
  Matrix weights_;
  Matrix memory_;
  Matrix class_text_;
  std::vector<ClassIndex> learned_;
};

}  // namespace rail

#endif  // RAIL_PRIMAL_ADAPTER_HPP_
