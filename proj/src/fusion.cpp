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

#include "rail/fusion.hpp"

#include <cmath>
#include <string>

#include "rail/error.hpp"

namespace rail {
namespace {

// First maximum, i.e. the lowest index on ties.
Eigen::Index first_max(const Eigen::Ref<const Eigen::RowVectorXd>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) best = j;
  }
  return best;
}

}  // namespace

void FusionConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "beta must lie in [0, 1]");
  if (!(logit_scale > 0.0) || !std::isfinite(logit_scale)) {
    throw Error(ErrorCode::kInvalidArgument, "logit_scale must be positive");
  }
}

Vector softmax(const Eigen::Ref<const Vector>& logits) {
  if (logits.size() == 0) throw Error(ErrorCode::kEmptyLabelSet, "softmax over no classes");
  const Vector e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

Matrix zero_shot_probs(const Matrix& images, const Matrix& text_vectors, double logit_scale) {
  if (text_vectors.rows() == 0) throw Error(ErrorCode::kEmptyLabelSet, "no class text vectors");
  if (images.cols() != text_vectors.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "image and text dimensions differ");
  }
  Matrix probs(images.rows(), text_vectors.rows());
  for (Eigen::Index i = 0; i < images.rows(); ++i) {
    const double norm = images.row(i).norm();
    Vector sims = text_vectors * images.row(i).transpose();
    if (norm > 0.0) sims /= norm;
    probs.row(i) = softmax(logit_scale * sims).transpose();
  }
  return probs;
}

Vector zero_shot_probs(const Vector& image, const TextEmbeddingTable& texts, double logit_scale) {
  return zero_shot_probs(Matrix(image.transpose()), texts.vectors, logit_scale).row(0).transpose();
}

GateDecision gate(const Eigen::Ref<const Vector>& zs, const LabelRegistry& registry) {
  if (zs.size() != registry.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch, "zero-shot vector must cover every class");
  }
  if (zs.size() == 0) throw Error(ErrorCode::kEmptyLabelSet, "no classes registered");
  const auto c = static_cast<ClassIndex>(first_max(zs.transpose()));
  return {registry.is_seen(c), c};
}

Vector fuse_slices(const Eigen::Ref<const Vector>& adapter_logits,
                   const Eigen::Ref<const Vector>& zs_slice, const FusionConfig& config) {
  if (adapter_logits.size() != zs_slice.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "adapter scores and zero-shot slice differ in size");
  }
  const Vector adapter = config.raw_fusion ? Vector(adapter_logits) : softmax(adapter_logits);
  return (1.0 - config.beta) * adapter + config.beta * zs_slice;
}

Vector fuse(const Eigen::Ref<const Vector>& adapter_logits, const Eigen::Ref<const Vector>& zs,
            std::span<const ClassIndex> learned, const FusionConfig& config) {
  if (adapter_logits.size() != static_cast<Eigen::Index>(learned.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "adapter scores must cover the learned classes");
  }
  Vector slice(static_cast<Eigen::Index>(learned.size()));
  for (std::size_t j = 0; j < learned.size(); ++j) {
    if (learned[j] < 0 || learned[j] >= zs.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "learned class outside the zero-shot label set");
    }
    slice[static_cast<Eigen::Index>(j)] = zs[learned[j]];
  }
  return fuse_slices(adapter_logits, slice, config);
}

std::vector<ClassIndex> classify_batch(const Matrix& images, const Matrix& zs,
                                       const Adapter* adapter, const LabelRegistry& registry,
                                       const FusionConfig& config) {
  config.validate();
  if (zs.rows() != images.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "one zero-shot row per image required");
  }
  std::vector<ClassIndex> out(static_cast<std::size_t>(images.rows()));
  std::vector<Eigen::Index> id_rows;
  for (Eigen::Index i = 0; i < images.rows(); ++i) {
    const GateDecision g = gate(zs.row(i).transpose(), registry);
    out[static_cast<std::size_t>(i)] = g.class_index;
    if (g.in_distribution) id_rows.push_back(i);
  }
  if (id_rows.empty()) return out;
  if (adapter == nullptr || adapter->empty()) {
    throw Error(ErrorCode::kInvalidArgument, "registry has seen classes but no adapter was given");
  }
  Matrix id_images(static_cast<Eigen::Index>(id_rows.size()), images.cols());
  for (std::size_t k = 0; k < id_rows.size(); ++k) {
    id_images.row(static_cast<Eigen::Index>(k)) = images.row(id_rows[k]);
  }
  const Matrix logits = adapter->predict(id_images);
  const auto& learned = adapter->learned_classes();
  for (std::size_t k = 0; k < id_rows.size(); ++k) {
    const Vector fused = fuse(logits.row(static_cast<Eigen::Index>(k)).transpose(),
                              zs.row(id_rows[k]).transpose(), learned, config);
    out[static_cast<std::size_t>(id_rows[k])] = learned[argmax_by_class(fused, learned)];
  }
  return out;
}

ClassIndex classify(const Vector& image, const Adapter* adapter, const TextEmbeddingTable& texts,
                    const LabelRegistry& registry, const FusionConfig& config) {
  const Matrix images = image.transpose();
  const Matrix zs = zero_shot_probs(images, texts.vectors, config.logit_scale);
  return classify_batch(images, zs, adapter, registry, config).front();
}

std::vector<ClassIndex> row_argmax(const Matrix& scores) {
  std::vector<ClassIndex> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    if (scores.cols() == 0) throw Error(ErrorCode::kEmptyLabelSet, "argmax over no classes");
    out[static_cast<std::size_t>(i)] = static_cast<ClassIndex>(first_max(scores.row(i)));
  }
  return out;
}

}  // namespace rail
