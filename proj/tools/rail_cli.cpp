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

// rail: command-line front end for the protocol runner.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rail/embedding_store.hpp"
#include "rail/error.hpp"
#include "rail/metrics.hpp"
#include "rail/protocol.hpp"
#include "rail/report.hpp"
#include "rail/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct RunFlags {
  std::string config_file;
  std::string data_dir;
  std::string order_file;
  std::optional<std::string> mode;
  std::optional<std::string> adapter;
  std::optional<std::string> kernel;
  std::optional<std::string> targets;
  std::optional<int> shots;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::optional<double> gamma;
  std::optional<int> rhl_dim;
  std::optional<std::uint64_t> rhl_seed;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config_file, "JSON run config; flags override it");
  app->add_option("--data-dir", f.data_dir, "Directory of <domain>_{train,test,text}.emb files");
  app->add_option("--order", f.order_file, "File listing the domain learning order");
  app->add_option("--mode", f.mode, "xtail or mtil");
  app->add_option("--adapter", f.adapter, "primal or dual");
  app->add_option("--kernel", f.kernel, "rbf or linear (dual adapter)");
  app->add_option("--targets", f.targets, "one_hot or text");
  app->add_option("--shots", f.shots, "Training samples per class");
  app->add_option("--seed", f.seed, "Sampling seed");
  app->add_option("--beta", f.beta, "Fusion ratio");
  app->add_option("--lambda", f.lambda, "Ridge regularization (skips its grid search)");
  app->add_option("--gamma", f.gamma, "RBF bandwidth (skips its grid search)");
  app->add_option("--rhl-dim", f.rhl_dim, "Random hidden layer width (primal adapter)");
  app->add_option("--rhl-seed", f.rhl_seed, "Random hidden layer seed");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rail::Error(rail::ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rail::Error(rail::ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

rail::RunConfig build_config(const RunFlags& f) {
  rail::RunConfig c;
  if (!f.config_file.empty()) c = rail::config_from_json(read_text(f.config_file));
  if (!f.data_dir.empty()) c.data_dir = f.data_dir;
  if (!f.order_file.empty()) c.domains = rail::read_order_file(f.order_file);
  if (f.mode) c.mode = rail::protocol_mode_from_string(*f.mode);
  if (f.adapter) c.adapter = rail::adapter_kind_from_string(*f.adapter);
  if (f.kernel) c.kernel = rail::kernel_kind_from_string(*f.kernel);
  if (f.targets) c.targets = rail::target_mode_from_string(*f.targets);
  if (f.shots) c.shots = *f.shots;
  if (f.seed) c.seed = *f.seed;
  if (f.beta) c.fusion.beta = *f.beta;
  if (f.lambda) c.lambda = *f.lambda;
  if (f.gamma) c.gamma = *f.gamma;
  if (f.rhl_dim) c.rhl_dim = *f.rhl_dim;
  if (f.rhl_seed) c.rhl_seed = *f.rhl_seed;
  if (c.data_dir.empty()) throw rail::Error(rail::ErrorCode::kInvalidArgument, "no --data-dir given");
  c.validate();
  return c;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw rail::Error(rail::ErrorCode::kInvalidArgument, "bad sweep value '" + item + "'");
    }
    values.push_back(v);
  }
  return values;
}

void cmd_ingest(const std::vector<std::string>& inputs, const std::string& out_dir) {
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    try {
      rail::EmbeddingDataset d = rail::load_embeddings(inputs[k]);
      d.validate();
      std::cout << inputs[k] << ": " << d.size() << " x " << d.dim() << ", " << d.num_classes()
                << " classes, " << rail::to_string(d.role) << '\n';
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        rail::save_embeddings(fs::path(out_dir) / fs::path(inputs[k]).filename(), d);
      }
    } catch (const rail::Error& e) {
      throw rail::Error(e.code(), "file " + std::to_string(k + 1) + " (" + inputs[k] + "): " + e.detail(),
                        e.row());
    }
  }
}

void cmd_synth(const rail::SynthSpec& spec, const std::string& out_dir) {
  const auto domains = rail::synthesize_domains(spec);
  fs::create_directories(out_dir);
  std::string order;
  for (const auto& d : domains) {
    const std::string& name = d.train.domain_name;
    rail::save_embeddings(fs::path(out_dir) / (name + "_train.emb"), d.train);
    rail::save_embeddings(fs::path(out_dir) / (name + "_test.emb"), d.test);
    rail::save_embeddings(fs::path(out_dir) / (name + "_text.emb"), d.text);
    order += name + "\n";
  }
  write_text(fs::path(out_dir) / "order.txt", order);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic incremental adapters over frozen vision-language embeddings"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Validate and normalize embedding files");
  std::vector<std::string> ingest_inputs;
  std::string ingest_out;
  ingest->add_option("files", ingest_inputs, "Embedding files")->required();
  ingest->add_option("--out-dir", ingest_out, "Write normalized copies here");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic fixture");
  rail::SynthSpec spec;
  std::string synth_out;
  synth->add_option("--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--domains", spec.n_domains, "Number of domains");
  synth->add_option("--classes", spec.classes_per_domain, "Classes per domain");
  synth->add_option("--samples", spec.samples_per_class, "Train samples per class");
  synth->add_option("--test-samples", spec.test_samples_per_class, "Test samples per class");
  synth->add_option("--dim", spec.dim, "Embedding dimension");
  synth->add_option("--separation", spec.separation, "Minimum angle between class means (radians)");
  synth->add_option("--noise", spec.noise, "Per-sample perturbation norm");
  synth->add_option("--shared", spec.shared_component, "Weight of the direction shared by all classes");
  synth->add_option("--coherence", spec.domain_coherence, "Weight of the per-domain direction");
  synth->add_option("--seed", spec.seed, "Generator seed");

  auto* grid = app.add_subcommand("grid-search", "Choose lambda (and gamma) on the first domain");
  RunFlags grid_flags;
  std::string grid_out;
  add_run_flags(grid, grid_flags);
  grid->add_option("--out", grid_out, "Write the JSON result here instead of stdout");

  auto* train = app.add_subcommand("train-eval", "Run the full incremental protocol");
  RunFlags train_flags;
  std::string train_out;
  std::string train_csv;
  add_run_flags(train, train_flags);
  train->add_option("--out", train_out, "Write the result JSON here instead of stdout");
  train->add_option("--csv", train_csv, "Also write the accuracy matrix as CSV");

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a saved matrix CSV");
  std::string metrics_in;
  std::string metrics_out;
  metrics->add_option("matrix", metrics_in, "Matrix CSV")->required();
  metrics->add_option("--out", metrics_out, "Write JSON here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Rerun the protocol over rhl_dim or beta values");
  RunFlags sweep_flags;
  std::string sweep_axis;
  std::string sweep_values;
  std::string sweep_out;
  bool sweep_no_timing = false;
  add_run_flags(sweep, sweep_flags);
  sweep->add_option("--axis", sweep_axis, "rhl_dim or beta")->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required();
  sweep->add_option("--out", sweep_out, "Write CSV here instead of stdout");
  sweep->add_flag("--no-timing", sweep_no_timing, "Omit the seconds column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      cmd_ingest(ingest_inputs, ingest_out);
    } else if (*synth) {
      cmd_synth(spec, synth_out);
    } else if (*grid) {
      const auto config = build_config(grid_flags);
      const auto bench = rail::load_benchmark(config);
      const auto result = rail::grid_search(bench, config);
      std::ostringstream out;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", result.best.lambda);
      out << "{\"lambda\": " << buf << ", \"gamma\": ";
      if (result.best.gamma) {
        std::snprintf(buf, sizeof(buf), "%.17g", *result.best.gamma);
        out << buf;
      } else {
        out << "null";
      }
      std::snprintf(buf, sizeof(buf), "%.17g", result.error);
      out << ", \"error\": " << buf << "}\n";
      emit(grid_out, out.str());
    } else if (*train) {
      const auto config = build_config(train_flags);
      const auto bench = rail::load_benchmark(config);
      const auto result = rail::run_protocol(bench, config);
      emit(train_out, rail::result_to_json(config, result));
      if (!train_csv.empty()) write_text(train_csv, rail::matrix_to_csv(result.matrix));
    } else if (*metrics) {
      const auto matrix = rail::matrix_from_csv(read_text(metrics_in));
      emit(metrics_out, rail::metrics_to_json(rail::compute_metrics(matrix)));
    } else if (*sweep) {
      const auto config = build_config(sweep_flags);
      const auto bench = rail::load_benchmark(config);
      const auto values = parse_values(sweep_values);
      const auto rows = rail::sweep_ablation(bench, config, rail::sweep_axis_from_string(sweep_axis), values);
      emit(sweep_out, rail::sweep_to_csv(rows, !sweep_no_timing));
    }
  } catch (const rail::Error& e) {
    std::cerr << "rail: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "rail: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
