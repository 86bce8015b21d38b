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

#include "rail/primal_adapter.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <string>

#include "binary_io.hpp"
#include "checkpoint_format.hpp"
#include "rail/error.hpp"

namespace rail {
namespace {

void check_rows(const Matrix& features, std::span<const ClassIndex> labels) {
  if (features.rows() < 1) throw Error(ErrorCode::kInvalidArgument, "domain has no samples");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and label count differ");
  }
}

void symmetrize(Matrix& m) {
  const Matrix t = m.transpose();
  m = 0.5 * (m + t);
}

}  // namespace

PrimalAdapter::PrimalAdapter(FeatureMap map, double lambda, TargetMode targets)
    : map_(std::move(map)), lambda_(lambda), targets_(targets) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be non-negative");
  }
}

void PrimalAdapter::learn(const Matrix& features, std::span<const ClassIndex> labels,
                          std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (empty()) {
    init(features, labels, classes, class_text);
  } else {
    update(features, labels, classes, class_text);
  }
}

void PrimalAdapter::append_class_text(const Matrix& class_text, std::size_t n_classes) {
  if (targets_ != TargetMode::kTextEmbedding) return;
  if (class_text.rows() != static_cast<Eigen::Index>(n_classes)) {
    throw Error(ErrorCode::kDimensionMismatch, "text targets need one row per new class");
  }
  if (class_text_.size() != 0 && class_text.cols() != class_text_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "text target dimension changed");
  }
  Matrix grown(class_text_.rows() + class_text.rows(), class_text.cols());
  if (class_text_.rows() > 0) grown.topRows(class_text_.rows()) = class_text_;
  grown.bottomRows(class_text.rows()) = class_text;
  class_text_ = std::move(grown);
}

void PrimalAdapter::init(const Matrix& features, std::span<const ClassIndex> labels,
                         std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (!empty()) throw Error(ErrorCode::kInvalidArgument, "adapter already initialized");
  check_rows(features, labels);
  const Matrix targets = detail::new_domain_targets(labels, classes, learned_);
  const Matrix phi = map_.project(features);

  Matrix gram = phi.transpose() * phi;
  gram.diagonal().array() += lambda_;
  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::kSingularSystem, "Phi^T Phi + lambda I is not positive definite");
  }
  memory_ = llt.solve(Matrix::Identity(gram.rows(), gram.cols()));
  symmetrize(memory_);
  weights_ = memory_ * (phi.transpose() * targets);

  append_class_text(class_text, classes.size());
  learned_.assign(classes.begin(), classes.end());
}

void PrimalAdapter::update(const Matrix& features, std::span<const ClassIndex> labels,
                           std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (empty()) throw Error(ErrorCode::kInvalidArgument, "update before init");
  check_rows(features, labels);
  const Matrix targets = detail::new_domain_targets(labels, classes, learned_);
  const Matrix phi = map_.project(features);

  // U = M Phi^T; M is symmetric so Phi M = U^T.
  const Matrix u = memory_ * phi.transpose();
  Matrix inner = phi * u;
  inner.diagonal().array() += 1.0;
  const Eigen::LLT<Matrix> llt(inner);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularSystem, "I + Phi M Phi^T is not positive definite");
  }
  memory_ -= u * llt.solve(u.transpose());
  symmetrize(memory_);

  const Matrix phi_t = phi.transpose();
  const Matrix correction = memory_ * (phi_t * (phi * weights_));
  Matrix grown(weights_.rows(), weights_.cols() + targets.cols());
  grown << weights_ - correction, memory_ * (phi_t * targets);
  weights_ = std::move(grown);

  append_class_text(class_text, classes.size());
  learned_.insert(learned_.end(), classes.begin(), classes.end());
}

Matrix PrimalAdapter::predict(const Matrix& features) const {
  if (features.cols() != map_.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(map_.input_dim()) +
                                                   " feature columns, got " +
                                                   std::to_string(features.cols()));
  }
  if (empty()) return Matrix::Zero(features.rows(), 0);
  Matrix logits = map_.project(features) * weights_;
  if (targets_ == TargetMode::kTextEmbedding) {
    logits = logits * (class_text_ * class_text_.transpose());
  }
  return logits;
}

void PrimalAdapter::save(const std::filesystem::path& path) const {
  detail::ByteWriter out;
  out.bytes(detail::kCheckpointMagic);
  out.u32(detail::kCheckpointVersion);
  out.u8(detail::kPrimalCheckpoint);
  out.f64(lambda_);
  out.u8(static_cast<std::uint8_t>(targets_));
  out.u8(map_.is_identity() ? 0 : 1);
  const RhlParams rhl = map_.rhl().value_or(RhlParams{0, map_.input_dim(), map_.output_dim()});
  out.u64(rhl.seed);
  out.u32(static_cast<std::uint32_t>(rhl.input_dim));
  out.u32(static_cast<std::uint32_t>(rhl.hidden_dim));
  out.u8(static_cast<std::uint8_t>(rhl.activation));
  out.u32(static_cast<std::uint32_t>(learned_.size()));
  for (ClassIndex c : learned_) out.i32(c);
  out.matrix(weights_);
  out.matrix(memory_);
  out.matrix(class_text_);
  detail::write_file(path, out.data());
}

PrimalAdapter PrimalAdapter::load(const std::filesystem::path& path) {
  const std::string raw = detail::read_file(path);
  detail::ByteReader in(raw);
  if (raw.size() < detail::kCheckpointMagic.size() ||
      in.bytes(detail::kCheckpointMagic.size()) != detail::kCheckpointMagic) {
    throw Error(ErrorCode::kBadMagic, path.string());
  }
  if (in.u32() != detail::kCheckpointVersion) {
    throw Error(ErrorCode::kBadFormat, "unsupported checkpoint version");
  }
  if (in.u8() != detail::kPrimalCheckpoint) {
    throw Error(ErrorCode::kBadFormat, "not a primal checkpoint");
  }
  const double lambda = in.f64();
  const std::uint8_t target_code = in.u8();
  const std::uint8_t map_kind = in.u8();
  RhlParams rhl;
  rhl.seed = in.u64();
  rhl.input_dim = static_cast<int>(in.u32());
  rhl.hidden_dim = static_cast<int>(in.u32());
  if (in.u8() != static_cast<std::uint8_t>(Activation::kRelu) || target_code > 1 || map_kind > 1) {
    throw Error(ErrorCode::kBadFormat, "unknown enum value in checkpoint");
  }
  FeatureMap map = map_kind == 0 ? FeatureMap::identity(rhl.input_dim)
                                 : FeatureMap::random_hidden_layer(rhl);
  PrimalAdapter adapter(std::move(map), lambda, static_cast<TargetMode>(target_code));
  const std::uint32_t n_learned = in.u32();
  for (std::uint32_t i = 0; i < n_learned && !in.at_end(); ++i) adapter.learned_.push_back(in.i32());
  adapter.weights_ = in.matrix();
  adapter.memory_ = in.matrix();
  adapter.class_text_ = in.matrix();
  const auto hidden = static_cast<Eigen::Index>(adapter.map_.output_dim());
  if (adapter.learned_.size() != n_learned ||
      adapter.weights_.cols() != static_cast<Eigen::Index>(n_learned) ||
      (n_learned > 0 && (adapter.weights_.rows() != hidden || adapter.memory_.rows() != hidden ||
                         adapter.memory_.cols() != hidden)) ||
      !in.at_end()) {
    throw Error(ErrorCode::kBadFormat, "inconsistent primal checkpoint " + path.string());
  }
  return adapter;
}

}  // namespace rail
