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

#ifndef RAIL_ADAPTER_HPP_
#define RAIL_ADAPTER_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "rail/types.hpp"

namespace rail {

// Regression targets. Text-embedding targets regress onto the class text
// vectors; scores are then similarities to those vectors. Internally the
// per-class (one-hot) columns are kept either way, since Y_text = Y * T.
enum class TargetMode { kOneHot, kTextEmbedding };

std::string_view to_string(TargetMode mode);
TargetMode target_mode_from_string(std::string_view name);

// Incremental ridge-regression classifier over the learned classes C_L.
// Learning is single-writer; between calls the state is immutable and
// predict() may run concurrently.
class Adapter {
 public:
  virtual ~Adapter() = default;

  // Learns one domain. `classes` are the global indices this domain
  // introduces (disjoint from learned_classes()); every label must be one of
  // them. `class_text` holds one text vector per entry of `classes` and is
  // required in text-embedding target mode. The first call initializes.
  virtual void learn(const Matrix& features, std::span<const ClassIndex> labels,
                     std::span<const ClassIndex> classes, const Matrix& class_text = Matrix()) = 0;

  // n x |C_L| scores; column j belongs to learned_classes()[j].
  virtual Matrix predict(const Matrix& features) const = 0;

  // One weight vector per learned class, in a space shared by all classes
  // (used by the domain-prototype diagnostics).
  virtual Matrix class_weights() const = 0;

  virtual const std::vector<ClassIndex>& learned_classes() const = 0;
  virtual int input_dim() const = 0;

  bool empty() const { return learned_classes().empty(); }
};

// Index into `learned` of the largest score; ties go to the lowest global
// class index.
Eigen::Index argmax_by_class(const Eigen::Ref<const Vector>& scores,
                             std::span<const ClassIndex> learned);

namespace detail {

// One-hot targets for `labels` over the columns `classes`. Checks that
// `classes` is duplicate-free and disjoint from `learned` (OverlappingLabels)
// and that every label is one of `classes` (LabelOutOfRange).
Matrix new_domain_targets(std::span<const ClassIndex> labels, std::span<const ClassIndex> classes,
                          std::span<const ClassIndex> learned);

}  // namespace detail

}  // namespace rail

#endif  // RAIL_ADAPTER_HPP_
