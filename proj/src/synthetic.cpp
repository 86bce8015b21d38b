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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rail/error.hpp"
#include "rail/random.hpp"

namespace rail {
namespace {

constexpr int kMaxAttempts = 64;

Vector gaussian_vector(Rng& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Vector unit_gaussian(Rng& rng, int dim) {
  Vector v = gaussian_vector(rng, dim);
  while (v.norm() == 0.0) v = gaussian_vector(rng, dim);
  return v / v.norm();
}

double min_pairwise_angle(const Matrix& means) {
  double best = std::numbers::pi;
  for (Eigen::Index i = 0; i < means.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < means.rows(); ++j) {
      const double cosine = std::clamp(means.row(i).dot(means.row(j)), -1.0, 1.0);
      best = std::min(best, std::acos(cosine));
    }
  }
  return best;
}

Matrix draw_class_means(const SynthSpec& spec, Rng& rng) {
  const int total = spec.n_domains * spec.classes_per_domain;
  const double own = std::sqrt(1.0 - spec.shared_component - spec.domain_coherence);
  const Vector shared = unit_gaussian(rng, spec.dim);
  std::vector<Vector> domain_dirs;
  for (int k = 0; k < spec.n_domains; ++k) domain_dirs.push_back(unit_gaussian(rng, spec.dim));

  // Modified Gram-Schmidt over the first min(total, dim) draws; later draws
  // cannot be orthogonal to a full basis and stay plain random directions.
  std::vector<Vector> basis;
  Matrix means(total, spec.dim);
  for (int c = 0; c < total; ++c) {
    Vector v = gaussian_vector(rng, spec.dim);
    if (static_cast<int>(basis.size()) < spec.dim) {
      for (const auto& q : basis) v -= v.dot(q) * q;
      if (v.norm() > 1e-12) {
        v /= v.norm();
        basis.push_back(v);
      }
    }
    if (v.norm() == 0.0) v = unit_gaussian(rng, spec.dim);
    v /= v.norm();
    Vector mean = own * v + std::sqrt(spec.domain_coherence) * domain_dirs[c / spec.classes_per_domain] +
                  std::sqrt(spec.shared_component) * shared;
    means.row(c) = (mean / mean.norm()).transpose();
  }
  return means;
}

EmbeddingDataset sample_split(const Matrix& means, int first_class, int n_classes, int per_class,
                              double noise, Rng& rng, SplitRole role) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = means.cols();
  const double scale = noise / std::sqrt(static_cast<double>(dim));
  EmbeddingDataset ds;
  ds.role = role;
  ds.normalized = true;
  ds.features.resize(static_cast<Eigen::Index>(n_classes) * per_class, dim);
  for (int c = 0; c < n_classes; ++c) {
    for (int s = 0; s < per_class; ++s) {
      Vector x = means.row(first_class + c).transpose();
      for (Eigen::Index i = 0; i < dim; ++i) x[i] += scale * normal(rng);
      const double norm = x.norm();
      if (norm > 0.0) x /= norm;
      ds.features.row(static_cast<Eigen::Index>(c) * per_class + s) = x.transpose();
      ds.labels.push_back(c);
    }
  }
  return ds;
}

}  // namespace

double max_min_angle(int n, int dim) {
  if (n < 2) return std::numbers::pi;
  if (n <= dim + 1) return std::acos(-1.0 / (n - 1));
  // Rankin: at most 2*dim vectors can be pairwise at least orthogonal, and
  // more than 2*dim must have some pair strictly closer than pi/2.
  return std::numbers::pi / 2;
}

std::vector<DomainData> synthesize_domains(const SynthSpec& spec) {
  if (spec.n_domains < 1 || spec.classes_per_domain < 1 || spec.samples_per_class < 1 ||
      spec.dim < 1 || spec.test_samples_per_class < 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic counts must be positive");
  }
  if (spec.noise < 0.0 || spec.separation < 0.0 || spec.shared_component < 0.0 ||
      spec.domain_coherence < 0.0 || spec.shared_component + spec.domain_coherence >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic mixing parameters");
  }
  const int total = spec.n_domains * spec.classes_per_domain;
  const double bound = max_min_angle(total, spec.dim);
  const bool strict = total > 2 * spec.dim;
  if (spec.separation > bound || (strict && spec.separation >= bound)) {
    throw Error(ErrorCode::kInfeasibleSeparation,
                std::to_string(total) + " classes cannot be " + std::to_string(spec.separation) +
                    " rad apart in " + std::to_string(spec.dim) + " dimensions");
  }

  Rng rng(spec.seed);
  Matrix means;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    means = draw_class_means(spec, rng);
    ok = total < 2 || min_pairwise_angle(means) >= spec.separation;
  }
  if (!ok) {
    throw Error(ErrorCode::kInfeasibleSeparation,
                "no class layout with separation " + std::to_string(spec.separation) + " found");
  }

  const int test_per_class =
      spec.test_samples_per_class > 0 ? spec.test_samples_per_class : spec.samples_per_class;
  std::vector<DomainData> out;
  for (int k = 0; k < spec.n_domains; ++k) {
    const int first = k * spec.classes_per_domain;
    std::vector<std::string> names;
    for (int c = 0; c < spec.classes_per_domain; ++c) {
      names.push_back("d" + std::to_string(k) + "_c" + std::to_string(c));
    }
    DomainData d;
    d.train = sample_split(means, first, spec.classes_per_domain, spec.samples_per_class,
                           spec.noise, rng, SplitRole::kTrain);
    d.test = sample_split(means, first, spec.classes_per_domain, test_per_class, spec.noise, rng,
                          SplitRole::kTest);
    d.text.role = SplitRole::kText;
    d.text.normalized = true;
    d.text.features = means.middleRows(first, spec.classes_per_domain);
    d.text.prompt_template = "A photo of a {}.";
    for (int c = 0; c < spec.classes_per_domain; ++c) d.text.labels.push_back(c);
    for (EmbeddingDataset* split : {&d.train, &d.test, &d.text}) {
      split->domain_name = "domain" + std::to_string(k);
      split->class_names = names;
      split->notes = "synthetic seed=" + std::to_string(spec.seed);
    }
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace rail
