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

#ifndef RAIL_PROTOCOL_HPP_
#define RAIL_PROTOCOL_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rail/adapter.hpp"
#include "rail/embedding_store.hpp"
#include "rail/fusion.hpp"
#include "rail/metrics.hpp"
#include "rail/projection.hpp"

namespace rail {

enum class AdapterKind { kPrimal, kDual };
// X-TAIL: one adapter, test images classified over all classes C_N.
// MTIL: one adapter per domain, test images classified within their domain.
enum class ProtocolMode { kXtail, kMtil };

std::string_view to_string(AdapterKind kind);
std::string_view to_string(ProtocolMode mode);
AdapterKind adapter_kind_from_string(std::string_view name);
ProtocolMode protocol_mode_from_string(std::string_view name);

struct GridSpec {
  std::vector<double> lambdas{1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<double> gammas{1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  double validation_fraction = 0.2;
};

struct RunConfig {
  // File-backed runs only: directory holding <domain>_{train,test,text}.emb
  // and the learning order.
  std::string data_dir;
  std::vector<std::string> domains;

  AdapterKind adapter = AdapterKind::kDual;
  ProtocolMode mode = ProtocolMode::kXtail;
  int shots = 16;
  std::uint64_t seed = 0;
  // Unset values are chosen by grid search on the first domain.
  std::optional<double> lambda;
  std::optional<double> gamma;
  KernelKind kernel = KernelKind::kRbf;
  int rhl_dim = 15000;
  std::uint64_t rhl_seed = 0;
  TargetMode targets = TargetMode::kOneHot;
  FusionConfig fusion;
  GridSpec grid;
  bool normalize = true;

  void validate() const;
};

struct Hyperparameters {
  double lambda = 1.0;
  std::optional<double> gamma;  // rbf dual adapter only
};

struct RunResult {
  MetricMatrix matrix;
  std::vector<double> zero_shot;  // per domain, before any learning
  Hyperparameters hyper;
};

// Adapter for the configured kind. `input_dim` sizes the RHL.
std::unique_ptr<Adapter> make_adapter(const RunConfig& config, int input_dim,
                                      const Hyperparameters& hyper);

// Per domain, the few-shot train split sampled with a seed derived from
// (config seed, domain position).
std::vector<EmbeddingDataset> few_shot_splits(const Benchmark& bench, int shots, std::uint64_t seed);

// Zero-shot accuracy of every domain's test set: over C_N for X-TAIL, within
// the domain's own classes for MTIL.
std::vector<double> zero_shot_accuracies(const Benchmark& bench, ProtocolMode mode,
                                         double logit_scale);

// Any failure inside a step is rethrown with the step index and domain name.
RunResult run_xtail(const Benchmark& bench, const RunConfig& config);
RunResult run_mtil(const Benchmark& bench, const RunConfig& config);
RunResult run_protocol(const Benchmark& bench, const RunConfig& config);

struct GridPoint {
  double lambda = 0.0;
  std::optional<double> gamma;
  double error = 0.0;
};

struct GridSearchResult {
  Hyperparameters best;
  double error = 0.0;
  std::vector<GridPoint> evaluated;
};

// Fits on a stratified split of `train` (the first domain) and scores mean
// squared one-hot regression error on the held-out part. Ties go to the
// larger lambda. Throws EmptyGrid.
GridSearchResult grid_search(const EmbeddingDataset& train, const LabelRegistry& registry,
                             const RunConfig& config, std::span<const double> lambdas,
                             std::span<const double> gammas, double validation_fraction,
                             std::uint64_t seed);
// Grid search on the first domain's few-shot split, honouring fixed values in
// `config` (a set lambda or gamma collapses that axis).
GridSearchResult grid_search(const Benchmark& bench, const RunConfig& config);
Hyperparameters resolve_hyperparameters(const Benchmark& bench, const RunConfig& config);

enum class SweepAxis { kRhlDim, kBeta };
SweepAxis sweep_axis_from_string(std::string_view name);

struct SweepRow {
  double value = 0.0;
  Metrics metrics;
  double seconds = 0.0;
};

// Reruns the protocol once per value; hyperparameters are resolved once and
// shared by every row.
std::vector<SweepRow> sweep_ablation(const Benchmark& bench, const RunConfig& config,
                                     SweepAxis axis, std::span<const double> values);
// value,transfer,average,last,seconds (transfer empty when absent).
std::string sweep_to_csv(std::span<const SweepRow> rows, bool with_timing = true);

// Learning order: `order.txt` in the directory if present, otherwise the
// alphabetical list of <name>_train.emb files.
std::vector<std::string> discover_domains(const std::filesystem::path& data_dir);
// One domain name per line; blank lines and '#' comments are skipped.
std::vector<std::string> read_order_file(const std::filesystem::path& path);
Benchmark load_benchmark(const RunConfig& config);

}  // namespace rail

#endif  // RAIL_PROTOCOL_HPP_
