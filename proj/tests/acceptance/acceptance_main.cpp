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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "../test_util.hpp"
#include "rail/diagnostics.hpp"
#include "rail/dual_adapter.hpp"
#include "rail/fusion.hpp"
#include "rail/metrics.hpp"
#include "rail/primal_adapter.hpp"
#include "rail/protocol.hpp"
#include "rail/synthetic.hpp"

namespace {

using rail::Matrix;

// Tolerances.
constexpr double kEquivalenceTol = 1e-8;
constexpr double kRuntimeLimitSeconds = 10.0;
constexpr double kDualityTol = 1e-6;
constexpr double kMetricTol = 1e-4;
constexpr int kSeeds = 20;
constexpr int kTrendRequired = 18;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

Outcome primal_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst_w = 0.0;
  double worst_m = 0.0;
  double worst_oracle = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    rail::Rng rng(static_cast<std::uint64_t>(seed) + 1000);
    const int domains = rail::testing::uniform_int(rng, 3, 5);
    const int cpd = rail::testing::uniform_int(rng, 2, 5);
    const int per = rail::testing::uniform_int(rng, 30, 500 / domains);
    const int d = rail::testing::uniform_int(rng, 8, 64);
    const int hidden = rail::testing::uniform_int(rng, 32, 256);
    const auto p = rail::testing::random_split_problem(rng, domains, cpd, per, d);
    const rail::RhlParams rhl{static_cast<std::uint64_t>(seed), d, hidden, rail::Activation::kRelu};
    const double lambda = 0.1;
    rail::PrimalAdapter inc(rail::FeatureMap::random_hidden_layer(rhl), lambda);
    for (int k = 0; k < domains; ++k) inc.learn(p.xs[k], p.ys[k], p.classes[k]);
    std::vector<rail::ClassIndex> all(static_cast<std::size_t>(p.n_classes));
    for (int c = 0; c < p.n_classes; ++c) all[static_cast<std::size_t>(c)] = c;
    rail::PrimalAdapter joint(rail::FeatureMap::random_hidden_layer(rhl), lambda);
    joint.learn(p.x, p.labels, all);
    worst_w = std::max(worst_w, rail::oracle::rel_frobenius(inc.weights(), joint.weights()));
    worst_m = std::max(worst_m, rail::oracle::rel_frobenius(inc.memory(), joint.memory()));
    const Matrix phi = rail::oracle::relu_project(p.x, rail::rhl_weight(rhl));
    const Matrix w_ref = rail::oracle::ridge_primal(phi, rail::oracle::one_hot(p.labels, p.n_classes), lambda);
    worst_oracle = std::max(worst_oracle, rail::oracle::rel_frobenius(inc.weights(), w_ref));
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = worst_w < kEquivalenceTol && worst_m < kEquivalenceTol && worst_oracle < kEquivalenceTol &&
           t < kRuntimeLimitSeconds;
  o.detail = fmt("max rel err W %.2e, M %.2e", worst_w, worst_m) + fmt(", vs QR oracle %.2e", worst_oracle) +
             fmt(", %.2fs", t);
  return o;
}

Outcome dual_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  bool structure = true;
  double worst_alpha = 0.0;
  double worst_oracle = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    rail::Rng rng(static_cast<std::uint64_t>(seed) + 2000);
    const int domains = rail::testing::uniform_int(rng, 3, 5);
    const int cpd = rail::testing::uniform_int(rng, 2, 5);
    const int per = rail::testing::uniform_int(rng, 30, 500 / domains);
    const int d = rail::testing::uniform_int(rng, 8, 64);
    const auto p = rail::testing::random_split_problem(rng, domains, cpd, per, d);
    const auto spec = rail::KernelSpec::rbf(1.0);
    const double lambda = 0.1;
    rail::DualAdapter inc(spec, lambda);
    for (int k = 0; k < domains; ++k) inc.learn(p.xs[k], p.ys[k], p.classes[k]);
    std::vector<rail::ClassIndex> all(static_cast<std::size_t>(p.n_classes));
    for (int c = 0; c < p.n_classes; ++c) all[static_cast<std::size_t>(c)] = c;
    rail::DualAdapter joint(spec, lambda);
    joint.learn(p.x, p.labels, all);
    structure = structure && inc.gram() == joint.gram() && inc.labels() == joint.labels() &&
                inc.prototypes() == joint.prototypes();
    worst_alpha = std::max(worst_alpha, rail::oracle::rel_frobenius(inc.alpha(), joint.alpha()));
    const Matrix alpha_ref = rail::oracle::kernel_ridge_alpha(
        rail::oracle::rbf_kernel(p.x, p.x, 1.0), rail::oracle::one_hot(p.labels, p.n_classes), lambda);
    worst_oracle = std::max(worst_oracle, rail::oracle::rel_frobenius(inc.alpha(), alpha_ref));
  }
  const double t = seconds_since(start);
  Outcome o;
  o.pass = structure && worst_alpha < kEquivalenceTol && worst_oracle < kEquivalenceTol &&
           t < kRuntimeLimitSeconds;
  o.detail = std::string("K, C, M_d ") + (structure ? "identical" : "DIFFER") +
             fmt("; max rel err alpha %.2e, vs LU oracle %.2e", worst_alpha, worst_oracle) + fmt(", %.2fs", t);
  return o;
}

Outcome duality() {
  double worst = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    rail::Rng rng(static_cast<std::uint64_t>(seed) + 3000);
    const int d = rail::testing::uniform_int(rng, 4, 64);
    const auto p = rail::testing::random_split_problem(rng, 3, 4, 100, d);
    const double lambda = std::pow(10.0, rail::testing::uniform_int(rng, -2, 1));
    rail::PrimalAdapter primal(rail::FeatureMap::identity(d), lambda);
    rail::DualAdapter dual(rail::KernelSpec::linear(), lambda);
    for (int k = 0; k < 3; ++k) {
      primal.learn(p.xs[k], p.ys[k], p.classes[k]);
      dual.learn(p.xs[k], p.ys[k], p.classes[k]);
    }
    const Matrix probe = rail::testing::gaussian(rng, 300, d);
    worst = std::max(worst, (primal.predict(probe) - dual.predict(probe)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (primal.predict(p.x) - dual.predict(p.x)).cwiseAbs().maxCoeff());
  }
  return {worst < kDualityTol, fmt("300-sample instances, max |primal - dual| logit %.2e", worst)};
}

rail::SynthSpec noisy_fixture(std::uint64_t seed) {
  rail::SynthSpec spec;
  spec.n_domains = 4;
  spec.classes_per_domain = 4;
  spec.samples_per_class = 20;
  spec.dim = 8;
  spec.noise = 0.9;
  spec.shared_component = 0.3;
  spec.seed = seed;
  return spec;
}

rail::RunConfig fixed_config(rail::AdapterKind kind) {
  rail::RunConfig c;
  c.adapter = kind;
  c.shots = 8;
  c.lambda = 0.1;
  c.gamma = 1.0;
  c.rhl_dim = 128;
  return c;
}

// Zero-shot accuracy of one test split over C_N, computed without the pipeline.
double standalone_zero_shot(const rail::Benchmark& bench, std::size_t domain, double scale) {
  const auto& test = bench.domains[domain].test;
  const auto truth = bench.registry.to_global(test);
  const Matrix zs = rail::zero_shot_probs(test.features, bench.texts.vectors, scale);
  int hits = 0;
  for (Eigen::Index i = 0; i < zs.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < zs.cols(); ++j) {
      if (zs(i, j) > zs(i, best)) best = j;
    }
    hits += best == truth[static_cast<std::size_t>(i)] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

Outcome zero_shot_preservation() {
  int cells = 0;
  int mismatches = 0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const rail::Benchmark bench = rail::assemble_benchmark(rail::synthesize_domains(noisy_fixture(seed)));
    for (auto kind : {rail::AdapterKind::kPrimal, rail::AdapterKind::kDual}) {
      rail::RunConfig c = fixed_config(kind);
      c.seed = static_cast<std::uint64_t>(seed);
      c.fusion.beta = (seed % 3) * 0.4;
      const rail::RunResult r = rail::run_xtail(bench, c);
      for (Eigen::Index i = 0; i < r.matrix.acc.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < r.matrix.acc.cols(); ++j) {
          ++cells;
          if (r.matrix.acc(i, j) != standalone_zero_shot(bench, static_cast<std::size_t>(j), c.fusion.logit_scale)) {
            ++mismatches;
          }
        }
      }
    }
  }
  return {mismatches == 0 && cells > 0,
          std::to_string(cells) + " unseen-domain cells, " + std::to_string(mismatches) + " differ from zero-shot"};
}

Outcome metric_arithmetic() {
  rail::MetricMatrix m;
  m.acc.resize(3, 3);
  m.acc << 0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90;
  m.domain_order = {"a", "b", "c"};
  const rail::Metrics r = rail::compute_metrics(m);
  const bool ok = r.transfer && std::abs(*r.transfer - 0.3667) <= kMetricTol &&
                  std::abs(r.average - 0.5) <= kMetricTol && std::abs(r.last - 0.8) <= kMetricTol;
  return {ok, fmt("transfer %.4f, average %.4f, last %.4f", r.transfer.value_or(-1.0), r.average, r.last)};
}

Outcome diagnostics_trend() {
  int wins = 0;
  double cc_dual = 0.0;
  double cc_linear = 0.0;
  double acc_dual = 0.0;
  double acc_linear = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    rail::SynthSpec spec;
    spec.n_domains = 4;
    spec.classes_per_domain = 8;
    spec.samples_per_class = 16;
    spec.dim = 16;
    spec.noise = 0.5;
    spec.shared_component = 0.3;
    spec.domain_coherence = 0.3;
    spec.seed = static_cast<std::uint64_t>(seed);
    const rail::Benchmark bench = rail::assemble_benchmark(rail::synthesize_domains(spec));
    rail::DualAdapter dual(rail::KernelSpec::rbf(0.5), 0.1);
    rail::PrimalAdapter linear(rail::FeatureMap::identity(spec.dim), 0.1);
    std::vector<rail::EmbeddingDataset> tests;
    for (std::size_t k = 0; k < bench.domains.size(); ++k) {
      const auto& train = bench.domains[k].train;
      const auto labels = bench.registry.to_global(train);
      dual.learn(train.features, labels, bench.classes_of(k).indices());
      linear.learn(train.features, labels, bench.classes_of(k).indices());
      tests.push_back(bench.domains[k].test);
    }
    const auto rd = rail::domain_prototype_diagnostics(dual, bench.registry, tests);
    const auto rl = rail::domain_prototype_diagnostics(linear, bench.registry, tests);
    double ad = 0.0;
    double al = 0.0;
    for (std::size_t k = 0; k < tests.size(); ++k) {
      ad += rd.in_domain_accuracy[k] / static_cast<double>(tests.size());
      al += rl.in_domain_accuracy[k] / static_cast<double>(tests.size());
    }
    if (rd.mean_off_diagonal() <= rl.mean_off_diagonal() && ad >= al) ++wins;
    cc_dual += rd.mean_off_diagonal() / kSeeds;
    cc_linear += rl.mean_off_diagonal() / kSeeds;
    acc_dual += ad / kSeeds;
    acc_linear += al / kSeeds;
  }
  return {wins >= kTrendRequired,
          std::to_string(wins) + "/" + std::to_string(kSeeds) + " seeds" +
              fmt("; mean CC dual %.3f vs linear %.3f", cc_dual, cc_linear) +
              fmt("; in-domain acc dual %.3f vs linear %.3f", acc_dual, acc_linear)};
}

Outcome beta_sweep() {
  bool transfer_same = true;
  bool zero_endpoint = true;
  bool one_endpoint = true;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const rail::Benchmark bench = rail::assemble_benchmark(rail::synthesize_domains(noisy_fixture(seed + 100)));
    rail::RunConfig c = fixed_config(rail::AdapterKind::kDual);
    c.seed = static_cast<std::uint64_t>(seed);
    const std::vector<double> betas{0.0, 0.2, 0.5, 0.8, 1.0};
    const auto rows = rail::sweep_ablation(bench, c, rail::SweepAxis::kBeta, betas);
    for (const auto& row : rows) transfer_same = transfer_same && row.metrics.transfer == rows[0].metrics.transfer;

    // Endpoint behaviour per prediction, replayed outside the harness.
    const auto few = rail::few_shot_splits(bench, c.shots, c.seed);
    rail::LabelRegistry reg = bench.registry;
    rail::DualAdapter adapter(rail::KernelSpec::rbf(*c.gamma), *c.lambda);
    for (std::size_t step = 0; step < bench.domains.size(); ++step) {
      adapter.learn(few[step].features, reg.to_global(few[step]), bench.classes_of(step).indices());
      reg.mark_seen(bench.classes_of(step));
      for (std::size_t j = 0; j < bench.domains.size(); ++j) {
        const Matrix& x = bench.domains[j].test.features;
        const Matrix zs = rail::zero_shot_probs(x, bench.texts.vectors, c.fusion.logit_scale);
        rail::FusionConfig f0 = c.fusion;
        f0.beta = 0.0;
        rail::FusionConfig f1 = c.fusion;
        f1.beta = 1.0;
        const auto p0 = rail::classify_batch(x, zs, &adapter, reg, f0);
        const auto p1 = rail::classify_batch(x, zs, &adapter, reg, f1);
        const Matrix logits = adapter.predict(x);
        const auto zs_pred = rail::row_argmax(zs);
        for (std::size_t i = 0; i < p0.size(); ++i) {
          const auto row = static_cast<Eigen::Index>(i);
          if (reg.is_seen(zs_pred[i])) {
            // Adapter-only: argmax of the raw adapter scores over C_L.
            const auto& learned = adapter.learned_classes();
            std::size_t best = 0;
            for (std::size_t k = 1; k < learned.size(); ++k) {
              if (logits(row, static_cast<Eigen::Index>(k)) > logits(row, static_cast<Eigen::Index>(best))) best = k;
            }
            zero_endpoint = zero_endpoint && p0[i] == learned[best];
          } else {
            zero_endpoint = zero_endpoint && p0[i] == zs_pred[i];
          }
          // Zero-shot slice: the zero-shot argmax everywhere.
          one_endpoint = one_endpoint && p1[i] == zs_pred[i];
        }
      }
    }
  }
  return {transfer_same && zero_endpoint && one_endpoint,
          std::string("transfer ") + (transfer_same ? "identical" : "VARIES") + " across beta; beta=0 " +
              (zero_endpoint ? "matches" : "DIFFERS from") + " adapter-only; beta=1 " +
              (one_endpoint ? "matches" : "DIFFERS from") + " zero-shot slice"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism(const std::string& cli) {
  const auto dir = std::filesystem::temp_directory_path() / "rail_acceptance_cli";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string data = (dir / "data").string();
  const std::string synth = cli + " synth --out-dir " + data + " --domains 3 --classes 4 --samples 20 --dim 12 --noise 0.6 --seed 5";
  if (std::system(synth.c_str()) != 0) return {false, "synth failed"};
  std::string outputs[2];
  for (int k = 0; k < 2; ++k) {
    const auto out = dir / ("run" + std::to_string(k) + ".json");
    const std::string cmd = cli + " train-eval --data-dir " + data + " --mode xtail --adapter dual --shots 8 --seed 3 --out " + out.string();
    if (std::system(cmd.c_str()) != 0) return {false, "train-eval failed"};
    outputs[k] = slurp(out);
  }
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  return {same, std::to_string(outputs[0].size()) + " bytes, " + (same ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path to rail cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"primal incremental == joint", primal_equivalence},
      {"dual incremental == joint", dual_equivalence},
      {"primal/dual duality (linear kernel)", duality},
      {"zero-shot preservation", zero_shot_preservation},
      {"metric arithmetic", metric_arithmetic},
      {"diagnostics trend", diagnostics_trend},
      {"beta sweep structure", beta_sweep},
      {"train-eval determinism", [&] { return cli_determinism(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
