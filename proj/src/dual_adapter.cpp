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

#include "rail/dual_adapter.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "binary_io.hpp"
#include "checkpoint_format.hpp"
#include "rail/error.hpp"

namespace rail {

DualAdapter::DualAdapter(KernelSpec kernel, double lambda, TargetMode targets)
    : kernel_(kernel), lambda_(lambda), targets_(targets) {
  kernel_.validate();
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  }
}

void DualAdapter::learn(const Matrix& features, std::span<const ClassIndex> labels,
                        std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (empty()) {
    init(features, labels, classes, class_text);
  } else {
    update(features, labels, classes, class_text);
  }
}

void DualAdapter::init(const Matrix& features, std::span<const ClassIndex> labels,
                       std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (!empty()) throw Error(ErrorCode::kInvalidArgument, "adapter already initialized");
  if (features.rows() < 1 || features.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "domain has no samples");
  }
  prototypes_ = Matrix(0, features.cols());
  gram_ = Matrix(0, 0);
  label_blocks_ = Matrix(0, 0);
  update_blocks(features, labels, classes, class_text);
}

void DualAdapter::update(const Matrix& features, std::span<const ClassIndex> labels,
                         std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (empty()) throw Error(ErrorCode::kInvalidArgument, "update before init");
  update_blocks(features, labels, classes, class_text);
}

void DualAdapter::update_blocks(const Matrix& features, std::span<const ClassIndex> labels,
                                std::span<const ClassIndex> classes, const Matrix& class_text) {
  if (static_cast<std::size_t>(features.rows()) != labels.size() || features.rows() < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and label count differ");
  }
  if (features.cols() != prototypes_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(prototypes_.cols()) +
                                                   " feature columns, got " +
                                                   std::to_string(features.cols()));
  }
  const Matrix targets = detail::new_domain_targets(labels, classes, learned_);
  if (targets_ == TargetMode::kTextEmbedding) {
    if (class_text.rows() != static_cast<Eigen::Index>(classes.size()) ||
        (class_text_.size() != 0 && class_text.cols() != class_text_.cols())) {
      throw Error(ErrorCode::kDimensionMismatch, "text targets need one row per new class");
    }
  }

  const Eigen::Index m = gram_.rows();
  const Eigen::Index n = features.rows();
  const Eigen::Index old_classes = label_blocks_.cols();

  // Grow K along the diagonal; the existing block is copied untouched.
  const Matrix cross = kernel_matrix(features, prototypes_, kernel_);
  Matrix gram(m + n, m + n);
  gram.topLeftCorner(m, m) = gram_;
  gram.bottomLeftCorner(n, m) = cross;
  gram.topRightCorner(m, n) = cross.transpose();
  gram.bottomRightCorner(n, n) = kernel_matrix(features, features, kernel_);

  Matrix blocks = Matrix::Zero(m + n, old_classes + targets.cols());
  blocks.topLeftCorner(m, old_classes) = label_blocks_;
  blocks.bottomRightCorner(n, targets.cols()) = targets;

  Matrix prototypes(m + n, features.cols());
  if (m > 0) prototypes.topRows(m) = prototypes_;
  prototypes.bottomRows(n) = features;

  // Solve before committing so a failure leaves the adapter unchanged.
  Matrix system = gram;
  system.diagonal().array() += lambda_;
  const Eigen::LLT<Matrix> llt(system);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularSystem, "K + lambda I is not positive definite");
  }
  alpha_ = llt.solve(blocks);
  gram_ = std::move(gram);
  label_blocks_ = std::move(blocks);
  prototypes_ = std::move(prototypes);
  if (targets_ == TargetMode::kTextEmbedding) {
    Matrix grown(class_text_.rows() + class_text.rows(), class_text.cols());
    if (class_text_.rows() > 0) grown.topRows(class_text_.rows()) = class_text_;
    grown.bottomRows(class_text.rows()) = class_text;
    class_text_ = std::move(grown);
  }
  learned_.insert(learned_.end(), classes.begin(), classes.end());
}

Matrix DualAdapter::predict(const Matrix& features) const {
  if (empty()) return Matrix::Zero(features.rows(), 0);
  if (features.cols() != prototypes_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(prototypes_.cols()) +
                                                   " feature columns, got " +
                                                   std::to_string(features.cols()));
  }
  Matrix logits = kernel_matrix(features, prototypes_, kernel_) * alpha_;
  if (targets_ == TargetMode::kTextEmbedding) {
    logits = logits * (class_text_ * class_text_.transpose());
  }
  return logits;
}

Matrix DualAdapter::class_weights() const { return prototypes_.transpose() * alpha_; }

void DualAdapter::save(const std::filesystem::path& path) const {
  detail::ByteWriter out;
  out.bytes(detail::kCheckpointMagic);
  out.u32(detail::kCheckpointVersion);
  out.u8(detail::kDualCheckpoint);
  out.f64(lambda_);
  out.u8(static_cast<std::uint8_t>(targets_));
  out.u8(static_cast<std::uint8_t>(kernel_.kind));
  out.f64(kernel_.gamma);
  out.u32(static_cast<std::uint32_t>(learned_.size()));
  for (ClassIndex c : learned_) out.i32(c);
  out.matrix(prototypes_);
  out.matrix(label_blocks_);
  out.matrix(alpha_);
  out.matrix(gram_);
  out.matrix(class_text_);
  detail::write_file(path, out.data());
}

DualAdapter DualAdapter::load(const std::filesystem::path& path) {
  const std::string raw = detail::read_file(path);
  detail::ByteReader in(raw);
  if (raw.size() < detail::kCheckpointMagic.size() ||
      in.bytes(detail::kCheckpointMagic.size()) != detail::kCheckpointMagic) {
    throw Error(ErrorCode::kBadMagic, path.string());
  }
  if (in.u32() != detail::kCheckpointVersion) {
    throw Error(ErrorCode::kBadFormat, "unsupported checkpoint version");
  }
  if (in.u8() != detail::kDualCheckpoint) throw Error(ErrorCode::kBadFormat, "not a dual checkpoint");
  const double lambda = in.f64();
  const std::uint8_t target_code = in.u8();
  const std::uint8_t kernel_code = in.u8();
  const double gamma = in.f64();
  if (target_code > 1 || kernel_code > 1) {
    throw Error(ErrorCode::kBadFormat, "unknown enum value in checkpoint");
  }
  DualAdapter adapter(KernelSpec{static_cast<KernelKind>(kernel_code), gamma}, lambda,
                      static_cast<TargetMode>(target_code));
  const std::uint32_t n_learned = in.u32();
  for (std::uint32_t i = 0; i < n_learned && !in.at_end(); ++i) adapter.learned_.push_back(in.i32());
  adapter.prototypes_ = in.matrix();
  adapter.label_blocks_ = in.matrix();
  adapter.alpha_ = in.matrix();
  adapter.gram_ = in.matrix();
  adapter.class_text_ = in.matrix();
  const Eigen::Index m = adapter.prototypes_.rows();
  if (adapter.learned_.size() != n_learned || adapter.gram_.rows() != m ||
      adapter.gram_.cols() != m || adapter.alpha_.rows() != m || adapter.label_blocks_.rows() != m ||
      adapter.alpha_.cols() != static_cast<Eigen::Index>(n_learned) || !in.at_end()) {
    throw Error(ErrorCode::kBadFormat, "inconsistent dual checkpoint " + path.string());
  }
  return adapter;
}

}  // namespace rail
