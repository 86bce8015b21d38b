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

#include "rail/adapter.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "rail/error.hpp"

namespace rail {

std::string_view to_string(TargetMode mode) {
  return mode == TargetMode::kOneHot ? "one_hot" : "text";
}

TargetMode target_mode_from_string(std::string_view name) {
  if (name == "one_hot" || name == "onehot") return TargetMode::kOneHot;
  if (name == "text" || name == "text_embedding") return TargetMode::kTextEmbedding;
  throw Error(ErrorCode::kInvalidArgument, "unknown target mode '" + std::string(name) + "'");
}

Eigen::Index argmax_by_class(const Eigen::Ref<const Vector>& scores,
                             std::span<const ClassIndex> learned) {
  if (scores.size() == 0) throw Error(ErrorCode::kEmptyLabelSet, "argmax over no classes");
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < scores.size(); ++j) {
    const bool tie_lower = scores[j] == scores[best] && learned[j] < learned[best];
    if (scores[j] > scores[best] || tie_lower) best = j;
  }
  return best;
}

namespace detail {

Matrix new_domain_targets(std::span<const ClassIndex> labels, std::span<const ClassIndex> classes,
                          std::span<const ClassIndex> learned) {
  if (classes.empty()) throw Error(ErrorCode::kEmptyLabelSet, "domain introduces no classes");
  const std::unordered_set<ClassIndex> old(learned.begin(), learned.end());
  std::unordered_map<ClassIndex, Eigen::Index> column;
  for (std::size_t j = 0; j < classes.size(); ++j) {
    if (old.count(classes[j])) {
      throw Error(ErrorCode::kOverlappingLabels,
                  "class " + std::to_string(classes[j]) + " already learned");
    }
    if (!column.emplace(classes[j], static_cast<Eigen::Index>(j)).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "class " + std::to_string(classes[j]) + " listed twice");
    }
  }
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(labels.size()),
                          static_cast<Eigen::Index>(classes.size()));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const auto it = column.find(labels[r]);
    if (it == column.end()) {
      if (old.count(labels[r])) {
        throw Error(ErrorCode::kOverlappingLabels,
                    "row " + std::to_string(r) + " uses learned class " + std::to_string(labels[r]));
      }
      throw Error(ErrorCode::kLabelOutOfRange,
                  "row " + std::to_string(r) + " label " + std::to_string(labels[r]), r);
    }
    y(static_cast<Eigen::Index>(r), it->second) = 1.0;
  }
  return y;
}

}  // namespace detail

}  // namespace rail
