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

#ifndef RAIL_SYNTHETIC_HPP_
#define RAIL_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "rail/embedding_store.hpp"

namespace rail {

// Gaussian class clusters on the unit sphere. Class means start from
// Gram-Schmidt orthogonalized random directions and are pulled toward a
// direction shared by all classes (`shared_component`) and one shared within
// each domain (`domain_coherence`), which controls cross-domain correlation.
struct SynthSpec {
  int n_domains = 3;
  int classes_per_domain = 4;
  int samples_per_class = 20;
  int test_samples_per_class = 0;  // 0: same as samples_per_class
  int dim = 16;
  double separation = 0.0;  // minimum pairwise angle between class means, radians
  double noise = 0.1;       // expected L2 norm of the per-sample perturbation
  double shared_component = 0.0;
  double domain_coherence = 0.0;
  std::uint64_t seed = 0;
};

// Per domain: train and test splits plus a text table whose rows are the class
// means, so zero-shot classification is meaningful. All rows are unit norm.
// Throws InfeasibleSeparation when no configuration of the requested classes
// can reach `separation` in `dim` dimensions (or the generator fails to).
std::vector<DomainData> synthesize_domains(const SynthSpec& spec);

// Upper bound on the smallest pairwise angle achievable by `n` unit vectors in
// `dim` dimensions (pi for n < 2).
double max_min_angle(int n, int dim);

}  // namespace rail

#endif  // RAIL_SYNTHETIC_HPP_
