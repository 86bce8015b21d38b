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

#ifndef RAIL_FUSION_HPP_
#define RAIL_FUSION_HPP_

#include <span>
#include <vector>

#include "rail/adapter.hpp"
#include "rail/embedding_store.hpp"

namespace rail {

struct FusionConfig {
  double beta = 0.8;           // weight of the zero-shot term on the ID path
  double logit_scale = 100.0;  // temperature applied to cosine similarities
  bool raw_fusion = false;     // fuse raw adapter scores instead of their softmax

  void validate() const;
};

// Softmax of logit_scale * cosine(image, text_c) over every row of `texts`.
Vector zero_shot_probs(const Vector& image, const TextEmbeddingTable& texts, double logit_scale);
// Batch form: one row of probabilities per image.
Matrix zero_shot_probs(const Matrix& images, const Matrix& text_vectors, double logit_scale);

Vector softmax(const Eigen::Ref<const Vector>& logits);

struct GateDecision {
  bool in_distribution = false;
  ClassIndex class_index = 0;  // zero-shot argmax (lowest index on ties)

  bool operator==(const GateDecision&) const = default;
};

// ID iff the zero-shot argmax is a seen class.
GateDecision gate(const Eigen::Ref<const Vector>& zs, const LabelRegistry& registry);

// (1 - beta) * softmax(adapter) + beta * zs restricted to `learned` (not
// renormalized). Column j belongs to learned[j].
Vector fuse(const Eigen::Ref<const Vector>& adapter_logits, const Eigen::Ref<const Vector>& zs,
            std::span<const ClassIndex> learned, const FusionConfig& config);

// Same combination when the caller already holds the zero-shot slice.
Vector fuse_slices(const Eigen::Ref<const Vector>& adapter_logits,
                   const Eigen::Ref<const Vector>& zs_slice, const FusionConfig& config);

// Full inference path: the zero-shot argmax is returned untouched on the OOD
// path; on the ID path the fused argmax over C_L. `adapter` may be null when
// nothing has been learned yet.
ClassIndex classify(const Vector& image, const Adapter* adapter, const TextEmbeddingTable& texts,
                    const LabelRegistry& registry, const FusionConfig& config);

// Batch form over precomputed zero-shot probabilities (rows over C_N).
std::vector<ClassIndex> classify_batch(const Matrix& images, const Matrix& zs,
                                       const Adapter* adapter, const LabelRegistry& registry,
                                       const FusionConfig& config);

// Argmax of each row (lowest index on ties).
std::vector<ClassIndex> row_argmax(const Matrix& scores);

}  // namespace rail

#endif  // RAIL_FUSION_HPP_
