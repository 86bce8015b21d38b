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

#include "rail/report.hpp"

#include <json.hpp>

#include "rail/error.hpp"

namespace rail {
namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["data_dir"] = c.data_dir;
  j["domains"] = c.domains;
  j["adapter"] = std::string(to_string(c.adapter));
  j["mode"] = std::string(to_string(c.mode));
  j["shots"] = c.shots;
  j["seed"] = c.seed;
  j["lambda"] = optional_number(c.lambda);
  j["gamma"] = optional_number(c.gamma);
  j["kernel"] = std::string(to_string(c.kernel));
  j["rhl_dim"] = c.rhl_dim;
  j["rhl_seed"] = c.rhl_seed;
  j["targets"] = std::string(to_string(c.targets));
  j["fusion"] = {{"beta", c.fusion.beta},
                 {"logit_scale", c.fusion.logit_scale},
                 {"raw_fusion", c.fusion.raw_fusion}};
  j["grid"] = {{"lambdas", c.grid.lambdas},
               {"gammas", c.grid.gammas},
               {"validation_fraction", c.grid.validation_fraction}};
  j["normalize"] = c.normalize;
  return j;
}

ordered_json metrics_json(const Metrics& m) {
  ordered_json j;
  j["transfer"] = optional_number(m.transfer);
  j["average"] = m.average;
  j["last"] = m.last;
  ordered_json per = ordered_json::array();
  for (const auto& d : m.per_domain) {
    per.push_back({{"domain", d.domain},
                   {"transfer", optional_number(d.transfer)},
                   {"average", d.average},
                   {"last", d.last}});
  }
  j["per_domain"] = per;
  return j;
}

std::optional<double> read_optional(const ordered_json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

void check_keys(const ordered_json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::kBadFormat, where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw Error(ErrorCode::kBadFormat, "unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2) + "\n"; }

RunConfig config_from_json(std::string_view text, RunConfig base) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kBadFormat, std::string("config: ") + e.what());
  }
  check_keys(j,
             {"data_dir", "domains", "adapter", "mode", "shots", "seed", "lambda", "gamma", "kernel",
              "rhl_dim", "rhl_seed", "targets", "fusion", "grid", "normalize"},
             "config");
  RunConfig c = std::move(base);
  try {
    if (j.contains("data_dir")) c.data_dir = j["data_dir"].get<std::string>();
    if (j.contains("domains")) c.domains = j["domains"].get<std::vector<std::string>>();
    if (j.contains("adapter")) c.adapter = adapter_kind_from_string(j["adapter"].get<std::string>());
    if (j.contains("mode")) c.mode = protocol_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("shots")) c.shots = j["shots"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("lambda")) c.lambda = read_optional(j["lambda"]);
    if (j.contains("gamma")) c.gamma = read_optional(j["gamma"]);
    if (j.contains("kernel")) c.kernel = kernel_kind_from_string(j["kernel"].get<std::string>());
    if (j.contains("rhl_dim")) c.rhl_dim = j["rhl_dim"].get<int>();
    if (j.contains("rhl_seed")) c.rhl_seed = j["rhl_seed"].get<std::uint64_t>();
    if (j.contains("targets")) c.targets = target_mode_from_string(j["targets"].get<std::string>());
    if (j.contains("normalize")) c.normalize = j["normalize"].get<bool>();
    if (j.contains("fusion")) {
      const auto& f = j["fusion"];
      check_keys(f, {"beta", "logit_scale", "raw_fusion"}, "fusion");
      if (f.contains("beta")) c.fusion.beta = f["beta"].get<double>();
      if (f.contains("logit_scale")) c.fusion.logit_scale = f["logit_scale"].get<double>();
      if (f.contains("raw_fusion")) c.fusion.raw_fusion = f["raw_fusion"].get<bool>();
    }
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      check_keys(g, {"lambdas", "gammas", "validation_fraction"}, "grid");
      if (g.contains("lambdas")) c.grid.lambdas = g["lambdas"].get<std::vector<double>>();
      if (g.contains("gammas")) c.grid.gammas = g["gammas"].get<std::vector<double>>();
      if (g.contains("validation_fraction")) {
        c.grid.validation_fraction = g["validation_fraction"].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string metrics_to_json(const Metrics& metrics) { return metrics_json(metrics).dump(2) + "\n"; }

std::string result_to_json(const RunConfig& config, const RunResult& result) {
  ordered_json j;
  j["config"] = config_json(config);
  j["domain_order"] = result.matrix.domain_order;
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < result.matrix.acc.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(result.matrix.acc.cols()));
    for (Eigen::Index k = 0; k < result.matrix.acc.cols(); ++k) {
      row[static_cast<std::size_t>(k)] = result.matrix.acc(i, k);
    }
    rows.push_back(row);
  }
  j["matrix"] = rows;
  j["zero_shot"] = result.zero_shot;
  j["metrics"] = metrics_json(compute_metrics(result.matrix));
  j["hyperparameters"] = {{"lambda", result.hyper.lambda},
                          {"gamma", optional_number(result.hyper.gamma)}};
  return j.dump(2) + "\n";
}

}  // namespace rail
