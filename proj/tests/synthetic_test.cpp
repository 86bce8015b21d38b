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

#include "rail/synthetic.hpp"

#include <fstream>
#include <functional>
#include <algorithm>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rail/error.hpp"

namespace rail {
namespace {

TEST(Synthetic, ShapeContract) {
  SynthSpec spec;
  spec.n_domains = 3;
  spec.classes_per_domain = 4;
  spec.samples_per_class = 20;
  spec.dim = 16;
  spec.seed = 7;
  const auto domains = synthesize_domains(spec);
  ASSERT_EQ(domains.size(), 3u);
  for (const auto& d : domains) {
    EXPECT_EQ(d.train.size(), 80u);
    EXPECT_EQ(d.test.size(), 80u);
    EXPECT_EQ(d.text.size(), 4u);
    EXPECT_EQ(d.train.dim(), 16);
    for (Eigen::Index r = 0; r < d.train.features.rows(); ++r) {
      EXPECT_NEAR(d.train.features.row(r).norm(), 1.0, 1e-12);
    }
  }
}

TEST(Synthetic, BitIdenticalForFixedSeed) {
  SynthSpec spec;
  spec.seed = 99;
  spec.shared_component = 0.3;
  const auto a = synthesize_domains(spec);
  const auto b = synthesize_domains(spec);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(a[k].train.features == b[k].train.features);
    EXPECT_TRUE(a[k].test.features == b[k].test.features);
    EXPECT_TRUE(a[k].text.features == b[k].text.features);
    EXPECT_EQ(a[k].train.labels, b[k].train.labels);
  }
}

TEST(Synthetic, ZeroSeparationAlwaysSucceeds) {
  SynthSpec spec;
  spec.n_domains = 4;
  spec.classes_per_domain = 10;
  spec.dim = 2;
  spec.separation = 0.0;
  EXPECT_NO_THROW(synthesize_domains(spec));
}

TEST(Synthetic, SeparationIsHonoured) {
  SynthSpec spec;
  spec.n_domains = 2;
  spec.classes_per_domain = 3;
  spec.dim = 16;
  spec.separation = 1.2;
  spec.seed = 3;
  const auto domains = synthesize_domains(spec);
  std::vector<Vector> means;
  for (const auto& d : domains) {
    for (Eigen::Index r = 0; r < d.text.features.rows(); ++r) means.push_back(d.text.features.row(r));
  }
  for (std::size_t i = 0; i < means.size(); ++i) {
    for (std::size_t j = i + 1; j < means.size(); ++j) {
      const double angle = std::acos(std::clamp(means[i].dot(means[j]), -1.0, 1.0));
      EXPECT_GE(angle, 1.2 - 1e-12);
    }
  }
}

TEST(Synthetic, ImpossibleSeparationRejected) {
  SynthSpec spec;
  spec.n_domains = 2;
  spec.classes_per_domain = 3;
  spec.dim = 2;
  spec.separation = 2.0;  // six directions in the plane: at most pi/3 apart
  try {
    synthesize_domains(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleSeparation);
  }
}

TEST(Synthetic, MaxMinAngleKnownValues) {
  EXPECT_NEAR(max_min_angle(2, 3), std::numbers::pi, 1e-12);
  EXPECT_NEAR(max_min_angle(4, 3), std::acos(-1.0 / 3.0), 1e-12);
  EXPECT_NEAR(max_min_angle(3, 8), 2.0 * std::numbers::pi / 3.0, 1e-12);
}

TEST(Synthetic, RejectsNonPositiveCounts) {
  SynthSpec spec;
  spec.classes_per_domain = 0;
  EXPECT_ANY_THROW(synthesize_domains(spec));
}

}  // namespace
}  // namespace rail
