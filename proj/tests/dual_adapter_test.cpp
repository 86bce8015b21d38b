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

#include <fstream>
#include <functional>
#include <algorithm>
#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <numeric>

#include "oracle.hpp"
#include "rail/error.hpp"
#include "rail/primal_adapter.hpp"
#include "test_util.hpp"

namespace rail {
namespace {

using testing::random_split_problem;

std::vector<ClassIndex> range(int begin, int end) {
  std::vector<ClassIndex> v(static_cast<std::size_t>(end - begin));
  std::iota(v.begin(), v.end(), begin);
  return v;
}

TEST(DualInit, ScalarLinear) {
  DualAdapter a(KernelSpec::linear(), 1.0);
  a.learn(Matrix::Ones(1, 1), std::vector<ClassIndex>{0}, range(0, 1));
  EXPECT_EQ(a.gram()(0, 0), 1.0);
  EXPECT_NEAR(a.alpha()(0, 0), 0.5, 1e-15);
}

TEST(DualInit, SingleRbfSample) {
  const double lambda = 0.25;
  DualAdapter a(KernelSpec::rbf(3.0), lambda);
  Matrix x(1, 3);
  x << 0.2, -0.4, 0.9;
  a.learn(x, std::vector<ClassIndex>{0}, range(0, 1));
  EXPECT_EQ(a.gram()(0, 0), 1.0);
  EXPECT_NEAR(a.alpha()(0, 0), 1.0 / (1.0 + lambda), 1e-15);
}

TEST(DualInit, LambdaMustBePositive) {
  try {
    DualAdapter(KernelSpec::linear(), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_ANY_THROW(DualAdapter(KernelSpec::rbf(1.0), -1.0));
}

TEST(DualUpdate, OrthogonalSingletons) {
  DualAdapter a(KernelSpec::linear(), 1.0);
  Matrix e1(1, 2);
  Matrix e2(1, 2);
  e1 << 1, 0;
  e2 << 0, 1;
  a.learn(e1, std::vector<ClassIndex>{0}, range(0, 1));
  a.learn(e2, std::vector<ClassIndex>{1}, range(1, 2));
  EXPECT_TRUE(a.gram() == Matrix::Identity(2, 2));
  EXPECT_LT((a.alpha() - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(DualUpdate, TopLeftBlockBitIdentical) {
  Rng rng(5);
  const auto p = random_split_problem(rng, 2, 3, 12, 6);
  DualAdapter a(KernelSpec::rbf(0.7), 0.1);
  a.learn(p.xs[0], p.ys[0], p.classes[0]);
  const Matrix k0 = a.gram();
  a.learn(p.xs[1], p.ys[1], p.classes[1]);
  EXPECT_TRUE(a.gram().topLeftCorner(12, 12) == k0);
}

TEST(DualUpdate, OverlappingClassesRejectedWithoutStateChange) {
  DualAdapter a(KernelSpec::linear(), 1.0);
  a.learn(Matrix::Identity(2, 2), std::vector<ClassIndex>{0, 1}, range(0, 2));
  const Matrix alpha = a.alpha();
  try {
    a.learn(Matrix::Identity(2, 2), std::vector<ClassIndex>{1, 2}, range(1, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlappingLabels);
  }
  EXPECT_TRUE(a.alpha() == alpha);
  EXPECT_EQ(a.num_prototypes(), 2);
}

TEST(DualPredict, PrototypeInterpolation) {
  Rng rng(2);
  Matrix x = testing::gaussian(rng, 4, 3);
  DualAdapter a(KernelSpec::rbf(5.0), 1e-9);
  a.learn(x, std::vector<ClassIndex>{0, 1, 2, 3}, range(0, 4));
  EXPECT_LT((a.predict(x) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(DualPredict, FarPointDecays) {
  Rng rng(2);
  DualAdapter a(KernelSpec::rbf(1.0), 0.1);
  a.learn(testing::gaussian(rng, 4, 3), std::vector<ClassIndex>{0, 1, 0, 1}, range(0, 2));
  const Matrix far = Matrix::Constant(1, 3, 1e3);
  EXPECT_LT(a.predict(far).cwiseAbs().maxCoeff(), 1e-300);
}

TEST(DualPredict, DimensionMismatch) {
  DualAdapter a(KernelSpec::linear(), 1.0);
  a.learn(Matrix::Identity(2, 2), std::vector<ClassIndex>{0, 1}, range(0, 2));
  EXPECT_ANY_THROW(a.predict(Matrix::Zero(1, 3)));
  EXPECT_ANY_THROW(a.learn(Matrix::Identity(3, 3), std::vector<ClassIndex>{2, 3, 4}, range(2, 5)));
}

TEST(DualProperty, EveryPrefixMatchesPooledConstruction) {
  for (int seed = 0; seed < testing::kSeeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 40);
    const int domains = testing::uniform_int(rng, 3, 5);
    const int cpd = testing::uniform_int(rng, 2, 4);
    const int per = testing::uniform_int(rng, 10, 100);
    const int d = testing::uniform_int(rng, 2, 64);
    const double lambda = std::pow(10.0, testing::uniform_int(rng, -2, 0));
    const double gamma = std::pow(10.0, testing::uniform_int(rng, -1, 1));
    const auto p = random_split_problem(rng, domains, cpd, per, d);
    DualAdapter a(KernelSpec::rbf(gamma), lambda);
    for (int k = 0; k < domains; ++k) {
      a.learn(p.xs[k], p.ys[k], p.classes[k]);
      const Eigen::Index rows = static_cast<Eigen::Index>(k + 1) * per;
      const Matrix pooled = p.x.topRows(rows);
      const std::vector<int> labels(p.labels.begin(), p.labels.begin() + rows);
      // Structure: exactly the pooled Gram, labels and prototypes.
      EXPECT_TRUE(a.gram() == kernel_matrix(pooled, pooled, KernelSpec::rbf(gamma)));
      EXPECT_TRUE(a.labels() == oracle::one_hot(labels, (k + 1) * cpd));
      EXPECT_TRUE(a.prototypes() == pooled);
      // Values: against the oracle kernel and solver.
      const Matrix k_ref = oracle::rbf_kernel(pooled, pooled, gamma);
      EXPECT_LT((a.gram() - k_ref).cwiseAbs().maxCoeff(), 1e-12);
      const Matrix alpha = oracle::kernel_ridge_alpha(k_ref, oracle::one_hot(labels, (k + 1) * cpd), lambda);
      EXPECT_LT(oracle::rel_frobenius(a.alpha(), alpha), 1e-8) << "seed " << seed << " step " << k;
      EXPECT_EQ(a.num_prototypes(), rows);
    }
  }
}

TEST(DualProperty, LabelMatrixIsBlockDiagonal) {
  Rng rng(77);
  const auto p = random_split_problem(rng, 4, 3, 10, 5);
  DualAdapter a(KernelSpec::rbf(1.0), 0.1);
  for (int k = 0; k < 4; ++k) a.learn(p.xs[k], p.ys[k], p.classes[k]);
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) {
      if (j == k) continue;
      EXPECT_TRUE(a.labels().block(10 * k, 3 * j, 10, 3).isZero(0.0));
    }
  }
}

TEST(DualProperty, RegularizedSystemIsPositiveDefinite) {
  for (int seed = 0; seed < testing::kSeeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 300);
    const int m = testing::uniform_int(rng, 2, 150);
    // Duplicated rows make K itself singular.
    Matrix x = testing::gaussian(rng, m, 3);
    x.bottomRows(m / 2) = x.topRows(m / 2);
    for (const auto& spec : {KernelSpec::rbf(0.5), KernelSpec::linear()}) {
      Matrix k = kernel_matrix(x, x, spec);
      k.diagonal().array() += 1e-6;
      EXPECT_EQ(Eigen::LLT<Matrix>(k).info(), Eigen::Success);
    }
  }
}

TEST(PrimalDual, LinearKernelMatchesIdentityPrimal) {
  for (int seed = 0; seed < testing::kSeeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed) + 60);
    const int d = testing::uniform_int(rng, 2, 40);
    const int per = testing::uniform_int(rng, 10, 100);
    const auto p = random_split_problem(rng, 3, 3, per, d);
    const double lambda = std::pow(10.0, testing::uniform_int(rng, -2, 1));
    PrimalAdapter primal(FeatureMap::identity(d), lambda);
    DualAdapter dual(KernelSpec::linear(), lambda);
    for (int k = 0; k < 3; ++k) {
      primal.learn(p.xs[k], p.ys[k], p.classes[k]);
      dual.learn(p.xs[k], p.ys[k], p.classes[k]);
    }
    const Matrix probe = testing::gaussian(rng, 50, d);
    EXPECT_LT((primal.predict(probe) - dual.predict(probe)).cwiseAbs().maxCoeff(), 1e-6);
    // Same weights once lifted back to feature space.
    EXPECT_LT((primal.class_weights() - dual.class_weights()).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(DualTextTargets, MatchesOracle) {
  Rng rng(6);
  const Matrix x = testing::gaussian(rng, 12, 5);
  std::vector<ClassIndex> y;
  for (int i = 0; i < 12; ++i) y.push_back(i % 3);
  Matrix t = testing::gaussian(rng, 3, 4);
  t.rowwise().normalize();
  DualAdapter a(KernelSpec::rbf(0.5), 0.2, TargetMode::kTextEmbedding);
  a.learn(x, y, range(0, 3), t);
  const Matrix k = oracle::rbf_kernel(x, x, 0.5);
  const Matrix alpha_text = oracle::kernel_ridge_alpha(k, oracle::one_hot(y, 3) * t, 0.2);
  EXPECT_LT((a.predict(x) - k * alpha_text * t.transpose()).norm(), 1e-9);
}

TEST(DualCheckpoint, RoundTripAndResume) {
  const auto dir = testing::temp_dir("dual_ckpt");
  Rng rng(3);
  const auto p = random_split_problem(rng, 3, 2, 12, 4);
  DualAdapter a(KernelSpec::rbf(0.8), 0.05);
  a.learn(p.xs[0], p.ys[0], p.classes[0]);
  a.learn(p.xs[1], p.ys[1], p.classes[1]);
  a.save(dir / "d.ckpt");
  DualAdapter b = DualAdapter::load(dir / "d.ckpt");
  EXPECT_TRUE(b.gram() == a.gram());
  EXPECT_TRUE(b.alpha() == a.alpha());
  EXPECT_TRUE(b.labels() == a.labels());
  EXPECT_EQ(b.kernel(), a.kernel());
  a.learn(p.xs[2], p.ys[2], p.classes[2]);
  b.learn(p.xs[2], p.ys[2], p.classes[2]);
  EXPECT_TRUE(b.alpha() == a.alpha());
}

TEST(DualCheckpoint, PrimalFileRejected) {
  const auto dir = testing::temp_dir("dual_kind");
  PrimalAdapter pa(FeatureMap::identity(2), 1.0);
  pa.learn(Matrix::Identity(2, 2), std::vector<ClassIndex>{0, 1}, range(0, 2));
  pa.save(dir / "p.ckpt");
  try {
    DualAdapter::load(dir / "p.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadFormat);
  }
}

}  // namespace
}  // namespace rail
