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

#include "rail/diagnostics.hpp"

#include <fstream>
#include <functional>
#include <algorithm>
#include <gtest/gtest.h>

#include "rail/dual_adapter.hpp"
#include "rail/error.hpp"
#include "rail/primal_adapter.hpp"
#include "rail/synthetic.hpp"
#include "test_util.hpp"

namespace rail {
namespace {

// Stand-in adapter with hand-set weights.
class FixedAdapter : public Adapter {
 public:
  FixedAdapter(Matrix weights, std::vector<ClassIndex> learned)
      : weights_(std::move(weights)), learned_(std::move(learned)) {}
  void learn(const Matrix&, std::span<const ClassIndex>, std::span<const ClassIndex>,
             const Matrix&) override {}
  Matrix predict(const Matrix& x) const override { return x * weights_; }
  Matrix class_weights() const override { return weights_; }
  const std::vector<ClassIndex>& learned_classes() const override { return learned_; }
  int input_dim() const override { return static_cast<int>(weights_.rows()); }

 private:
  Matrix weights_;
  std::vector<ClassIndex> learned_;
};

LabelRegistry two_domains(int dim) {
  LabelRegistry reg(dim);
  const std::vector<std::string> a{"a0", "a1"};
  const std::vector<std::string> b{"b0", "b1"};
  reg.register_domain(a, "A");
  reg.register_domain(b, "B");
  return reg;
}

TEST(Pearson, KnownValues) {
  Vector a(4);
  Vector b(4);
  a << 1, 2, 3, 4;
  b << 2, 4, 6, 8;
  EXPECT_NEAR(pearson(a, b), 1.0, 1e-15);
  EXPECT_NEAR(pearson(a, -b), -1.0, 1e-15);
  Vector c(4);
  Vector e(4);
  c << 1, -1, 1, -1;
  e << 1, 1, -1, -1;
  EXPECT_NEAR(pearson(c, e), 0.0, 1e-15);
  EXPECT_EQ(pearson(a, Vector::Ones(4)), 0.0);
}

TEST(Diagnostics, IdenticalColumnsGiveUnitCorrelation) {
  Matrix w(3, 4);
  w << 1, 2, 1, 2, 0, 1, 0, 1, 3, -1, 3, -1;
  const FixedAdapter ad(w, {0, 1, 2, 3});
  const auto reg = two_domains(3);
  const std::vector<EmbeddingDataset> tests{testing::make_dataset("A", Matrix::Identity(3, 3), {0, 1, 0}, 2),
                                            testing::make_dataset("B", Matrix::Identity(3, 3), {0, 1, 1}, 2)};
  const auto r = domain_prototype_diagnostics(ad, reg, tests);
  EXPECT_NEAR(r.correlation(0, 1), 1.0, 1e-15);
  EXPECT_EQ(r.correlation(0, 0), 1.0);
  EXPECT_NEAR(r.mean_off_diagonal(), 1.0, 1e-15);
}

TEST(Diagnostics, OrthogonalZeroMeanPrototypesGiveZero) {
  Matrix w(4, 4);
  // Domain prototypes: (1,-1,1,-1) and (1,1,-1,-1).
  w.col(0) << 1, -1, 1, -1;
  w.col(1) << 1, -1, 1, -1;
  w.col(2) << 2, 2, -2, -2;
  w.col(3) << 0, 0, 0, 0;
  const FixedAdapter ad(w, {0, 1, 2, 3});
  const auto reg = two_domains(4);
  const std::vector<EmbeddingDataset> tests{testing::make_dataset("A", Matrix::Identity(1, 4), {0}, 2),
                                            testing::make_dataset("B", Matrix::Identity(1, 4), {0}, 2)};
  const auto r = domain_prototype_diagnostics(ad, reg, tests);
  EXPECT_NEAR(r.correlation(0, 1), 0.0, 1e-15);
  EXPECT_TRUE(r.correlation == r.correlation.transpose());
}

TEST(Diagnostics, InDomainAccuracyCountsDomainHits) {
  // Scores: x * I, so the prediction is the largest coordinate.
  const FixedAdapter ad(Matrix::Identity(4, 4), {0, 1, 2, 3});
  const auto reg = two_domains(4);
  Matrix xa(4, 4);
  xa << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;  // 2 of 4 land in A
  const std::vector<EmbeddingDataset> tests{testing::make_dataset("A", xa, {0, 0, 0, 0}, 2),
                                            testing::make_dataset("B", xa, {0, 0, 0, 0}, 2)};
  const auto r = domain_prototype_diagnostics(ad, reg, tests);
  EXPECT_EQ(r.in_domain_accuracy, (std::vector<double>{0.5, 0.5}));
}

TEST(Diagnostics, NeedsTwoLearnedDomains) {
  const FixedAdapter ad(Matrix::Identity(2, 2), {0, 1});
  const auto reg = two_domains(2);
  const std::vector<EmbeddingDataset> tests{testing::make_dataset("A", Matrix::Identity(2, 2), {0, 1}, 2)};
  try {
    domain_prototype_diagnostics(ad, reg, tests);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientDomains);
  }
}

TEST(Diagnostics, DualPrototypesLiveInFeatureSpace) {
  SynthSpec spec;
  spec.n_domains = 3;
  spec.classes_per_domain = 3;
  spec.samples_per_class = 10;
  spec.dim = 8;
  spec.seed = 2;
  const Benchmark bench = assemble_benchmark(synthesize_domains(spec));
  DualAdapter dual(KernelSpec::rbf(2.0), 0.1);
  std::vector<EmbeddingDataset> tests;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& tr = bench.domains[k].train;
    dual.learn(tr.features, bench.registry.to_global(tr), bench.classes_of(k).indices());
    tests.push_back(bench.domains[k].test);
  }
  const auto r = domain_prototype_diagnostics(dual, bench.registry, tests);
  EXPECT_EQ(dual.class_weights().rows(), 8);
  EXPECT_EQ(r.domains.size(), 3u);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      EXPECT_GE(r.correlation(i, j), -1.0 - 1e-12);
      EXPECT_LE(r.correlation(i, j), 1.0 + 1e-12);
    }
  }
  for (double a : r.in_domain_accuracy) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

}  // namespace
}  // namespace rail
