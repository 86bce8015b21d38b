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

#include "rail/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "rail/dual_adapter.hpp"
#include "rail/error.hpp"
#include "rail/primal_adapter.hpp"
#include "rail/random.hpp"

namespace rail {
namespace {

constexpr std::uint64_t kGridStream = 0x67726964;  // "grid"

Error step_error(std::size_t step, const std::string& domain, const Error& cause) {
  return Error(cause.code(), "step " + std::to_string(step + 1) + " (domain '" + domain +
                                 "'): " + cause.detail(),
               cause.row());
}

double accuracy(const std::vector<ClassIndex>& predicted, const std::vector<ClassIndex>& truth) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return truth.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(truth.size());
}

Matrix class_text_for(const Benchmark& bench, const RunConfig& config, ClassRange range) {
  if (config.targets != TargetMode::kTextEmbedding) return Matrix();
  const auto classes = range.indices();
  return bench.texts.rows(classes);
}

std::vector<std::string> domain_names(const Benchmark& bench) {
  std::vector<std::string> names;
  for (const auto& d : bench.domains) names.push_back(d.train.domain_name);
  return names;
}

// Local zero-shot probabilities of a test split within its own domain.
Matrix local_zero_shot(const Benchmark& bench, std::size_t domain, double logit_scale) {
  const auto classes = bench.classes_of(domain).indices();
  return zero_shot_probs(bench.domains[domain].test.features, bench.texts.rows(classes), logit_scale);
}

// Stratified split: per class, round(fraction * n) held out, at least one on
// each side.
void split_validation(const EmbeddingDataset& data, double fraction, std::uint64_t seed,
                      std::vector<std::size_t>& fit, std::vector<std::size_t>& held_out) {
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.num_classes()));
  for (std::size_t r = 0; r < data.labels.size(); ++r) {
    by_class[static_cast<std::size_t>(data.labels[r])].push_back(r);
  }
  Rng rng(seed);
  for (auto& members : by_class) {
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid search needs at least two samples per class in '" + data.domain_name + "'");
    }
    shuffle_in_place(members, rng);
    const auto n = static_cast<double>(members.size());
    auto k = static_cast<std::size_t>(std::llround(fraction * n));
    k = std::clamp<std::size_t>(k, 1, members.size() - 1);
    held_out.insert(held_out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
    fit.insert(fit.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
  }
  std::sort(fit.begin(), fit.end());
  std::sort(held_out.begin(), held_out.end());
}

}  // namespace

std::string_view to_string(AdapterKind kind) { return kind == AdapterKind::kPrimal ? "primal" : "dual"; }
std::string_view to_string(ProtocolMode mode) { return mode == ProtocolMode::kXtail ? "xtail" : "mtil"; }

AdapterKind adapter_kind_from_string(std::string_view name) {
  if (name == "primal") return AdapterKind::kPrimal;
  if (name == "dual") return AdapterKind::kDual;
  throw Error(ErrorCode::kInvalidArgument, "unknown adapter '" + std::string(name) + "'");
}

ProtocolMode protocol_mode_from_string(std::string_view name) {
  if (name == "xtail") return ProtocolMode::kXtail;
  if (name == "mtil") return ProtocolMode::kMtil;
  throw Error(ErrorCode::kInvalidArgument, "unknown mode '" + std::string(name) + "'");
}

SweepAxis sweep_axis_from_string(std::string_view name) {
  if (name == "rhl_dim" || name == "rhl-dim") return SweepAxis::kRhlDim;
  if (name == "beta") return SweepAxis::kBeta;
  throw Error(ErrorCode::kInvalidArgument, "unknown sweep axis '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be at least 1");
  if (rhl_dim < 1) throw Error(ErrorCode::kInvalidArgument, "rhl_dim must be positive");
  if (lambda && !(*lambda >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be non-negative");
  if (gamma && !(*gamma > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  if (!(grid.validation_fraction > 0.0 && grid.validation_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "validation_fraction must lie in (0, 1)");
  }
  fusion.validate();
}

std::unique_ptr<Adapter> make_adapter(const RunConfig& config, int input_dim,
                                      const Hyperparameters& hyper) {
  if (config.adapter == AdapterKind::kPrimal) {
    RhlParams rhl{config.rhl_seed, input_dim, config.rhl_dim, Activation::kRelu};
    return std::make_unique<PrimalAdapter>(FeatureMap::random_hidden_layer(rhl), hyper.lambda,
                                           config.targets);
  }
  if (config.kernel == KernelKind::kRbf && !hyper.gamma) {
    throw Error(ErrorCode::kInvalidArgument, "rbf dual adapter needs a gamma");
  }
  const KernelSpec kernel =
      config.kernel == KernelKind::kRbf ? KernelSpec::rbf(*hyper.gamma) : KernelSpec::linear();
  return std::make_unique<DualAdapter>(kernel, hyper.lambda, config.targets);
}

std::vector<EmbeddingDataset> few_shot_splits(const Benchmark& bench, int shots, std::uint64_t seed) {
  std::vector<EmbeddingDataset> out;
  for (std::size_t k = 0; k < bench.domains.size(); ++k) {
    out.push_back(sample_few_shot(bench.domains[k].train, shots, derive_seed(seed, k)));
  }
  return out;
}

std::vector<double> zero_shot_accuracies(const Benchmark& bench, ProtocolMode mode,
                                         double logit_scale) {
  std::vector<double> out;
  for (std::size_t k = 0; k < bench.domains.size(); ++k) {
    const auto& test = bench.domains[k].test;
    const auto truth = bench.registry.to_global(test);
    std::vector<ClassIndex> predicted;
    if (mode == ProtocolMode::kXtail) {
      predicted = row_argmax(zero_shot_probs(test.features, bench.texts.vectors, logit_scale));
    } else {
      predicted = row_argmax(local_zero_shot(bench, k, logit_scale));
      for (auto& p : predicted) p += bench.classes_of(k).begin;
    }
    out.push_back(accuracy(predicted, truth));
  }
  return out;
}

RunResult run_xtail(const Benchmark& bench, const RunConfig& config) {
  config.validate();
  RunResult result;
  result.hyper = resolve_hyperparameters(bench, config);
  result.matrix.domain_order = domain_names(bench);
  result.zero_shot = zero_shot_accuracies(bench, ProtocolMode::kXtail, config.fusion.logit_scale);

  const std::size_t n = bench.domains.size();
  std::vector<Matrix> zs(n);
  std::vector<std::vector<ClassIndex>> truth(n);
  for (std::size_t j = 0; j < n; ++j) {
    zs[j] = zero_shot_probs(bench.domains[j].test.features, bench.texts.vectors,
                            config.fusion.logit_scale);
    truth[j] = bench.registry.to_global(bench.domains[j].test);
  }
  const auto few = few_shot_splits(bench, config.shots, config.seed);

  LabelRegistry registry = bench.registry;
  const auto adapter = make_adapter(config, registry.feature_dim(), result.hyper);
  result.matrix.acc.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t step = 0; step < n; ++step) {
    const std::string& name = bench.domains[step].train.domain_name;
    try {
      const ClassRange range = bench.classes_of(step);
      const auto labels = registry.to_global(few[step]);
      const auto classes = range.indices();
      adapter->learn(few[step].features, labels, classes, class_text_for(bench, config, range));
      registry.mark_seen(range);
      for (std::size_t j = 0; j < n; ++j) {
        const auto predicted = classify_batch(bench.domains[j].test.features, zs[j], adapter.get(),
                                              registry, config.fusion);
        result.matrix.acc(static_cast<Eigen::Index>(step), static_cast<Eigen::Index>(j)) =
            accuracy(predicted, truth[j]);
      }
    } catch (const Error& e) {
      throw step_error(step, name, e);
    }
  }
  return result;
}

RunResult run_mtil(const Benchmark& bench, const RunConfig& config) {
  config.validate();
  RunResult result;
  result.hyper = resolve_hyperparameters(bench, config);
  result.matrix.domain_order = domain_names(bench);
  result.zero_shot = zero_shot_accuracies(bench, ProtocolMode::kMtil, config.fusion.logit_scale);

  const std::size_t n = bench.domains.size();
  std::vector<Matrix> zs(n);
  std::vector<std::vector<ClassIndex>> truth(n);
  for (std::size_t j = 0; j < n; ++j) {
    zs[j] = local_zero_shot(bench, j, config.fusion.logit_scale);
    truth[j] = bench.registry.to_global(bench.domains[j].test);
  }
  const auto few = few_shot_splits(bench, config.shots, config.seed);

  std::vector<std::unique_ptr<Adapter>> adapters;
  result.matrix.acc.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t step = 0; step < n; ++step) {
    const std::string& name = bench.domains[step].train.domain_name;
    try {
      const ClassRange range = bench.classes_of(step);
      auto adapter = make_adapter(config, bench.registry.feature_dim(), result.hyper);
      adapter->learn(few[step].features, bench.registry.to_global(few[step]), range.indices(),
                     class_text_for(bench, config, range));
      adapters.push_back(std::move(adapter));

      for (std::size_t j = 0; j < n; ++j) {
        const ClassRange local = bench.classes_of(j);
        std::vector<ClassIndex> predicted;
        if (j <= step) {
          const Adapter& a = *adapters[j];
          const Matrix logits = a.predict(bench.domains[j].test.features);
          for (Eigen::Index i = 0; i < logits.rows(); ++i) {
            const Vector fused =
                fuse_slices(logits.row(i).transpose(), zs[j].row(i).transpose(), config.fusion);
            predicted.push_back(a.learned_classes()[argmax_by_class(fused, a.learned_classes())]);
          }
        } else {
          predicted = row_argmax(zs[j]);
          for (auto& p : predicted) p += local.begin;
        }
        result.matrix.acc(static_cast<Eigen::Index>(step), static_cast<Eigen::Index>(j)) =
            accuracy(predicted, truth[j]);
      }
    } catch (const Error& e) {
      throw step_error(step, name, e);
    }
  }
  return result;
}

RunResult run_protocol(const Benchmark& bench, const RunConfig& config) {
  return config.mode == ProtocolMode::kXtail ? run_xtail(bench, config) : run_mtil(bench, config);
}

GridSearchResult grid_search(const EmbeddingDataset& train, const LabelRegistry& registry,
                             const RunConfig& config, std::span<const double> lambdas,
                             std::span<const double> gammas, double validation_fraction,
                             std::uint64_t seed) {
  const bool uses_gamma = config.adapter == AdapterKind::kDual && config.kernel == KernelKind::kRbf;
  if (lambdas.empty() || (uses_gamma && gammas.empty())) {
    throw Error(ErrorCode::kEmptyGrid, "grid search needs at least one value per searched axis");
  }
  std::vector<std::size_t> fit_rows;
  std::vector<std::size_t> val_rows;
  split_validation(train, validation_fraction, seed, fit_rows, val_rows);
  const EmbeddingDataset fit = select_rows(train, fit_rows);
  const EmbeddingDataset val = select_rows(train, val_rows);
  const ClassRange range = registry.domain_range(train.domain_name);
  const auto classes = range.indices();
  const auto fit_labels = registry.to_global(fit);
  const auto val_labels = registry.to_global(val);
  Matrix val_targets = Matrix::Zero(static_cast<Eigen::Index>(val_labels.size()), range.size());
  for (std::size_t r = 0; r < val_labels.size(); ++r) {
    val_targets(static_cast<Eigen::Index>(r), val_labels[r] - range.begin) = 1.0;
  }

  // The search always regresses onto one-hot targets.
  RunConfig probe = config;
  probe.targets = TargetMode::kOneHot;
  const std::vector<std::optional<double>> gamma_axis = [&] {
    std::vector<std::optional<double>> axis;
    if (!uses_gamma) {
      axis.push_back(std::nullopt);
    } else {
      for (double g : gammas) axis.push_back(g);
    }
    return axis;
  }();

  GridSearchResult result;
  bool have_best = false;
  for (double lambda : lambdas) {
    for (const auto& gamma : gamma_axis) {
      GridPoint point{lambda, gamma, 0.0};
      auto adapter = make_adapter(probe, registry.feature_dim(), {lambda, gamma});
      try {
        adapter->learn(fit.features, fit_labels, classes);
        const Matrix residual = val_targets - adapter->predict(val.features);
        point.error = residual.squaredNorm() / static_cast<double>(val_labels.size());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingularSystem) throw;
        point.error = std::numeric_limits<double>::infinity();
      }
      if (!std::isfinite(point.error)) point.error = std::numeric_limits<double>::infinity();
      result.evaluated.push_back(point);
      const bool better = !have_best || point.error < result.error ||
                          (point.error == result.error && lambda > result.best.lambda);
      if (better) {
        result.best = {lambda, gamma};
        result.error = point.error;
        have_best = true;
      }
    }
  }
  if (!std::isfinite(result.error)) {
    throw Error(ErrorCode::kSingularSystem, "every grid point failed to factorize");
  }
  return result;
}

GridSearchResult grid_search(const Benchmark& bench, const RunConfig& config) {
  if (bench.domains.empty()) throw Error(ErrorCode::kInvalidArgument, "no domains");
  const auto first = sample_few_shot(bench.domains.front().train, config.shots, derive_seed(config.seed, 0));
  std::vector<double> lambdas = config.lambda ? std::vector<double>{*config.lambda} : config.grid.lambdas;
  std::vector<double> gammas = config.gamma ? std::vector<double>{*config.gamma} : config.grid.gammas;
  return grid_search(first, bench.registry, config, lambdas, gammas, config.grid.validation_fraction,
                     derive_seed(config.seed, kGridStream));
}

Hyperparameters resolve_hyperparameters(const Benchmark& bench, const RunConfig& config) {
  const bool uses_gamma = config.adapter == AdapterKind::kDual && config.kernel == KernelKind::kRbf;
  if (config.lambda && (config.gamma || !uses_gamma)) {
    return {*config.lambda, uses_gamma ? config.gamma : std::nullopt};
  }
  return grid_search(bench, config).best;
}

std::vector<SweepRow> sweep_ablation(const Benchmark& bench, const RunConfig& config,
                                     SweepAxis axis, std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one value");
  RunConfig base = config;
  const Hyperparameters hyper = resolve_hyperparameters(bench, config);
  base.lambda = hyper.lambda;
  base.gamma = hyper.gamma;
  std::vector<SweepRow> rows;
  for (double value : values) {
    RunConfig run = base;
    if (axis == SweepAxis::kBeta) {
      run.fusion.beta = value;
    } else {
      if (!(value >= 1.0) || value != std::floor(value)) {
        throw Error(ErrorCode::kInvalidArgument, "rhl_dim values must be positive integers");
      }
      run.rhl_dim = static_cast<int>(value);
    }
    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run_protocol(bench, run);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    rows.push_back({value, compute_metrics(result.matrix), elapsed.count()});
  }
  return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows, bool with_timing) {
  std::ostringstream out;
  out << "value,transfer,average,last" << (with_timing ? ",seconds" : "") << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& row : rows) {
    out << num(row.value) << ',' << (row.metrics.transfer ? num(*row.metrics.transfer) : "") << ','
        << num(row.metrics.average) << ',' << num(row.metrics.last);
    if (with_timing) out << ',' << num(row.seconds);
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> read_order_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    names.push_back(line.substr(first, last - first + 1));
  }
  if (names.empty()) throw Error(ErrorCode::kInvalidArgument, "order file lists no domains");
  return names;
}

std::vector<std::string> discover_domains(const std::filesystem::path& data_dir) {
  const auto order = data_dir / "order.txt";
  if (std::filesystem::exists(order)) return read_order_file(order);
  std::vector<std::string> names;
  const std::string suffix = "_train.emb";
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir, ec)) {
    const std::string file = entry.path().filename().string();
    if (file.size() > suffix.size() && file.ends_with(suffix)) {
      names.push_back(file.substr(0, file.size() - suffix.size()));
    }
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot list " + data_dir.string());
  std::sort(names.begin(), names.end());
  if (names.empty()) throw Error(ErrorCode::kInvalidArgument, "no *_train.emb files in " + data_dir.string());
  return names;
}

Benchmark load_benchmark(const RunConfig& config) {
  const std::filesystem::path dir(config.data_dir);
  const auto names = config.domains.empty() ? discover_domains(dir) : config.domains;
  LoadOptions options;
  options.normalize = config.normalize;
  std::vector<DomainData> domains;
  for (std::size_t k = 0; k < names.size(); ++k) {
    try {
      DomainData d;
      d.train = load_embeddings(dir / (names[k] + "_train.emb"), options);
      d.test = load_embeddings(dir / (names[k] + "_test.emb"), options);
      // Text vectors are always unit norm.
      d.text = load_embeddings(dir / (names[k] + "_text.emb"), LoadOptions{true});
      d.train.role = SplitRole::kTrain;
      d.test.role = SplitRole::kTest;
      d.text.role = SplitRole::kText;
      domains.push_back(std::move(d));
    } catch (const Error& e) {
      throw step_error(k, names[k], e);
    }
  }
  return assemble_benchmark(std::move(domains));
}

}  // namespace rail
