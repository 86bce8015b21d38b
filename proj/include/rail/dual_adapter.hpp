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

#ifndef RAIL_DUAL_ADAPTER_HPP_
#define RAIL_DUAL_ADAPTER_HPP_

#include <filesystem>
#include <span>
#include <vector>

#include "rail/adapter.hpp"
#include "rail/projection.hpp"

namespace rail {

// Kernel ridge classifier whose prototype memory grows by domain.
//
// The memory M_d stacks the raw training embeddings of every learned domain.
// Each domain extends the Gram matrix along its diagonal,
//
//   K' = [ K          k(X, M_d)^T ]      C' = [ C  0 ]
//        [ k(X, M_d)  k(X, X)     ],          [ 0  Y ],
//
// and the coefficients are recomputed as alpha = (K' + lambda I)^-1 C'.
// Scores for x are k(x, M_d) alpha.
class DualAdapter final : public Adapter {
 public:
  // lambda > 0 (InvalidArgument otherwise).
  DualAdapter(KernelSpec kernel, double lambda, TargetMode targets = TargetMode::kOneHot);

  void learn(const Matrix& features, std::span<const ClassIndex> labels,
             std::span<const ClassIndex> classes, const Matrix& class_text = Matrix()) override;
  void init(const Matrix& features, std::span<const ClassIndex> labels,
            std::span<const ClassIndex> classes, const Matrix& class_text = Matrix());
  void update(const Matrix& features, std::span<const ClassIndex> labels,
              std::span<const ClassIndex> classes, const Matrix& class_text = Matrix());

  Matrix predict(const Matrix& features) const override;
  // M_d^T alpha: each class's coefficients lifted to feature space as a
  // kernel-weighted sum of its prototypes.
  Matrix class_weights() const override;
  const std::vector<ClassIndex>& learned_classes() const override { return learned_; }
  int input_dim() const override { return static_cast<int>(prototypes_.cols()); }

  const Matrix& gram() const { return gram_; }
  const Matrix& alpha() const { return alpha_; }
  const Matrix& prototypes() const { return prototypes_; }
  const Matrix& labels() const { return label_blocks_; }
  double lambda() const { return lambda_; }
  const KernelSpec& kernel() const { return kernel_; }
  TargetMode target_mode() const { return targets_; }
  const Matrix& class_text() const { return class_text_; }
  Eigen::Index num_prototypes() const { return prototypes_.rows(); }

  // Persists K alongside M_d so a resumed run is bit-stable.
  void save(const std::filesystem::path& path) const;
  static DualAdapter load(const std::filesystem::path& path);

 private:
  void update_blocks(const Matrix& features, std::span<const ClassIndex> labels,
                     std::span<const ClassIndex> classes, const Matrix& class_text);

  KernelSpec kernel_;
  double lambda_;
  TargetMode targets_;
  Matrix gram_;
  Matrix alpha_;
  Matrix prototypes_;
  Matrix label_blocks_;
  Matrix class_text_;
  std::vector<ClassIndex> learned_;
};

}  // namespace rail

#endif  // RAIL_DUAL_ADAPTER_HPP_
