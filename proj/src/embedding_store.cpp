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

#include "rail/embedding_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_set>

#include <json.hpp>

#include "rail/error.hpp"
#include "binary_io.hpp"
#include "rail/random.hpp"

namespace rail {
namespace {

using detail::get_le;
using detail::put_le;
using detail::read_file;
using detail::write_file;

constexpr std::array<char, 8> kMagic = {'R', 'A', 'I', 'L', 'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderBytes = 8 + 4 + 4 + 8 + 1;

}  // namespace

std::string_view to_string(SplitRole role) {
  switch (role) {
    case SplitRole::kTrain: return "train";
    case SplitRole::kTest: return "test";
    case SplitRole::kText: return "text";
  }
  return "train";
}

SplitRole split_role_from_string(std::string_view name) {
  if (name == "train") return SplitRole::kTrain;
  if (name == "test") return SplitRole::kTest;
  if (name == "text") return SplitRole::kText;
  throw Error(ErrorCode::kBadFormat, "unknown split role '" + std::string(name) + "'");
}

void EmbeddingDataset::validate() const {
  if (features.rows() < 1 || features.cols() < 1) {
    throw Error(ErrorCode::kDimensionMismatch, "dataset '" + domain_name + "' is empty");
  }
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature rows and label count differ in '" + domain_name + "'");
  }
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    if (!features.row(r).allFinite()) {
      throw Error(ErrorCode::kNonFiniteValue, "row " + std::to_string(r),
                  static_cast<std::size_t>(r));
    }
  }
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0 || labels[r] >= num_classes()) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "row " + std::to_string(r) + " label " + std::to_string(labels[r]), r);
    }
  }
}

std::vector<ClassIndex> ClassRange::indices() const {
  std::vector<ClassIndex> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (ClassIndex c = begin; c < end; ++c) out.push_back(c);
  return out;
}

LabelRegistry::LabelRegistry(int feature_dim) : feature_dim_(feature_dim) {
  if (feature_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "feature dimension must be positive");
  }
}

ClassRange LabelRegistry::register_domain(std::span<const std::string> class_names,
                                          const std::string& domain_name) {
  if (std::find(domain_order_.begin(), domain_order_.end(), domain_name) != domain_order_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "domain '" + domain_name + "' already registered");
  }
  std::unordered_set<std::string> incoming;
  for (const auto& name : class_names) {
    if (find(name).has_value() || !incoming.insert(name).second) {
      throw Error(ErrorCode::kDuplicateClassName, name);
    }
  }
  ClassRange range{num_classes(), num_classes() + static_cast<int>(class_names.size())};
  for (const auto& name : class_names) {
    entries_.push_back({name, domain_name});
    seen_.push_back(false);
  }
  domain_order_.push_back(domain_name);
  domain_ranges_.push_back(range);
  return range;
}

void LabelRegistry::mark_seen(const std::string& domain_name) {
  mark_seen(domain_range(domain_name));
}

void LabelRegistry::mark_seen(ClassRange range) {
  for (ClassIndex c = range.begin; c < range.end; ++c) seen_.at(c) = true;
}

std::vector<ClassIndex> LabelRegistry::seen_classes() const {
  std::vector<ClassIndex> out;
  for (std::size_t c = 0; c < seen_.size(); ++c) {
    if (seen_[c]) out.push_back(static_cast<ClassIndex>(c));
  }
  return out;
}

std::optional<ClassIndex> LabelRegistry::find(const std::string& class_name) const {
  for (std::size_t c = 0; c < entries_.size(); ++c) {
    if (entries_[c].class_name == class_name) return static_cast<ClassIndex>(c);
  }
  return std::nullopt;
}

ClassRange LabelRegistry::domain_range(const std::string& domain_name) const {
  for (std::size_t i = 0; i < domain_order_.size(); ++i) {
    if (domain_order_[i] == domain_name) return domain_ranges_[i];
  }
  throw Error(ErrorCode::kUnknownDomain, domain_name);
}

std::vector<ClassIndex> LabelRegistry::to_global(const EmbeddingDataset& dataset) const {
  if (dataset.dim() != feature_dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dataset '" + dataset.domain_name + "' has d=" + std::to_string(dataset.dim()) +
                    ", registry expects " + std::to_string(feature_dim_));
  }
  const ClassRange range = domain_range(dataset.domain_name);
  if (range.size() != dataset.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "class list of '" + dataset.domain_name + "' differs from registration");
  }
  for (int i = 0; i < range.size(); ++i) {
    if (entries_[range.begin + i].class_name != dataset.class_names[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "class order of '" + dataset.domain_name + "' differs from registration");
    }
  }
  std::vector<ClassIndex> out(dataset.labels.size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    const int local = dataset.labels[r];
    if (local < 0 || local >= range.size()) {
      throw Error(ErrorCode::kLabelOutOfRange, "row " + std::to_string(r), r);
    }
    out[r] = range.begin + local;
  }
  return out;
}

void TextEmbeddingTable::validate(const LabelRegistry& registry) const {
  if (vectors.rows() != registry.num_classes()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "text table has " + std::to_string(vectors.rows()) + " rows for " +
                    std::to_string(registry.num_classes()) + " classes");
  }
  if (vectors.cols() != registry.feature_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "text vector dimension differs from features");
  }
  for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
    if (!vectors.row(r).allFinite()) {
      throw Error(ErrorCode::kNonFiniteValue, "text row " + std::to_string(r),
                  static_cast<std::size_t>(r));
    }
    const double norm = vectors.row(r).norm();
    if (std::abs(norm - 1.0) > 1e-6) {
      throw Error(ErrorCode::kInvalidArgument,
                  "text vector " + std::to_string(r) + " is not unit norm");
    }
  }
}

Matrix TextEmbeddingTable::rows(std::span<const ClassIndex> classes) const {
  Matrix out(static_cast<Eigen::Index>(classes.size()), vectors.cols());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = vectors.row(classes[i]);
  }
  return out;
}

Benchmark assemble_benchmark(std::vector<DomainData> domains) {
  if (domains.empty()) throw Error(ErrorCode::kInvalidArgument, "no domains");
  const int dim = domains.front().train.dim();
  Benchmark bench;
  bench.registry = LabelRegistry(dim);
  for (auto& d : domains) {
    const std::string& name = d.train.domain_name;
    for (const EmbeddingDataset* split : {&d.train, &d.test, &d.text}) {
      split->validate();
      if (split->domain_name != name || split->class_names != d.train.class_names) {
        throw Error(ErrorCode::kInvalidArgument,
                    "splits of domain '" + name + "' disagree on name or classes");
      }
      if (split->dim() != dim) {
        throw Error(ErrorCode::kDimensionMismatch, "domain '" + name + "' has d=" +
                                                       std::to_string(split->dim()) +
                                                       ", expected " + std::to_string(dim));
      }
    }
    if (static_cast<int>(d.text.size()) != d.text.num_classes()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "text table of '" + name + "' needs one row per class");
    }
    bench.registry.register_domain(d.train.class_names, name);
  }
  bench.texts.vectors = Matrix::Zero(bench.registry.num_classes(), dim);
  std::vector<bool> covered(static_cast<std::size_t>(bench.registry.num_classes()), false);
  for (const auto& d : domains) {
    const auto global = bench.registry.to_global(d.text);
    for (std::size_t r = 0; r < global.size(); ++r) {
      Vector v = d.text.features.row(static_cast<Eigen::Index>(r)).transpose();
      const double norm = v.norm();
      if (norm > 0.0) v /= norm;
      bench.texts.vectors.row(global[r]) = v.transpose();
      covered[static_cast<std::size_t>(global[r])] = true;
    }
    if (d.text.prompt_template) bench.texts.prompt_template = *d.text.prompt_template;
  }
  for (std::size_t c = 0; c < covered.size(); ++c) {
    if (!covered[c]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "text table misses class '" + bench.registry.entry(static_cast<int>(c)).class_name + "'");
    }
  }
  bench.texts.validate(bench.registry);
  bench.domains = std::move(domains);
  return bench;
}

std::filesystem::path manifest_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingDataset& dataset) {
  dataset.validate();
  const auto n = static_cast<std::uint64_t>(dataset.features.rows());
  const auto d = static_cast<std::uint32_t>(dataset.features.cols());
  std::string bytes;
  bytes.reserve(kHeaderBytes + n * d * 4 + n * 4);
  bytes.append(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(bytes, d);
  put_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(dataset.num_classes()));
  put_le<std::uint64_t>(bytes, n);
  put_le<std::uint8_t>(bytes, dataset.normalized ? 1 : 0);
  for (Eigen::Index r = 0; r < dataset.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < dataset.features.cols(); ++c) {
      const auto value = static_cast<float>(dataset.features(r, c));
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::kNonFiniteValue, "row " + std::to_string(r) + " overflows f32",
                    static_cast<std::size_t>(r));
      }
      put_le<std::uint32_t>(bytes, std::bit_cast<std::uint32_t>(value));
    }
  }
  for (int label : dataset.labels) put_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(label));
  write_file(path, bytes);

  nlohmann::ordered_json manifest;
  manifest["domain_name"] = dataset.domain_name;
  manifest["class_names"] = dataset.class_names;
  manifest["role"] = std::string(to_string(dataset.role));
  manifest["normalized"] = dataset.normalized;
  manifest["notes"] = dataset.notes;
  if (dataset.prompt_template) manifest["prompt_template"] = *dataset.prompt_template;
  write_file(manifest_path(path), manifest.dump(2) + "\n");
}

EmbeddingDataset load_embeddings(const std::filesystem::path& path, const LoadOptions& options) {
  const std::string raw = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < kMagic.size() || std::memcmp(raw.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic, path.string());
  }
  if (raw.size() < kHeaderBytes) {
    throw Error(ErrorCode::kBadFormat, "truncated header in " + path.string());
  }
  const auto d = get_le<std::uint32_t>(p + 8);
  const auto n_classes = get_le<std::uint32_t>(p + 12);
  const auto n = get_le<std::uint64_t>(p + 16);
  const bool flagged = p[24] != 0;
  if (d == 0 || n == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "empty dataset in " + path.string());
  }
  // Guard the size arithmetic against absurd headers before multiplying.
  const std::uint64_t payload = raw.size() - kHeaderBytes;
  if (n > payload / 4 || d > payload / 4 / n) {
    throw Error(ErrorCode::kDimensionMismatch, "payload too short for header in " + path.string());
  }
  const std::uint64_t expected = n * d * 4 + n * 4;
  if (payload != expected) {
    throw Error(ErrorCode::kDimensionMismatch,
                "payload has " + std::to_string(payload) + " bytes, header implies " +
                    std::to_string(expected) + " in " + path.string());
  }

  EmbeddingDataset ds;
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const unsigned char* cursor = p + kHeaderBytes;
  for (std::uint64_t r = 0; r < n; ++r) {
    for (std::uint32_t c = 0; c < d; ++c, cursor += 4) {
      const float value = std::bit_cast<float>(get_le<std::uint32_t>(cursor));
      if (!std::isfinite(value)) {
        throw Error(ErrorCode::kNonFiniteValue, "row " + std::to_string(r), r);
      }
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = value;
    }
  }
  ds.labels.resize(n);
  for (std::uint64_t r = 0; r < n; ++r, cursor += 4) {
    const auto label = get_le<std::uint32_t>(cursor);
    if (label >= n_classes) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "row " + std::to_string(r) + " label " + std::to_string(label), r);
    }
    ds.labels[r] = static_cast<int>(label);
  }
  ds.normalized = flagged;

  const auto mpath = manifest_path(path);
  if (std::filesystem::exists(mpath)) {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(read_file(mpath));
      ds.domain_name = manifest.at("domain_name").get<std::string>();
      ds.class_names = manifest.at("class_names").get<std::vector<std::string>>();
      ds.role = split_role_from_string(manifest.value("role", std::string("train")));
      ds.notes = manifest.value("notes", std::string());
      if (manifest.contains("prompt_template")) {
        ds.prompt_template = manifest["prompt_template"].get<std::string>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kBadFormat, "manifest " + mpath.string() + ": " + e.what());
    }
    if (ds.class_names.size() != n_classes) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "manifest lists " + std::to_string(ds.class_names.size()) +
                      " classes, header says " + std::to_string(n_classes));
    }
  } else {
    ds.domain_name = path.stem().string();
    for (std::uint32_t c = 0; c < n_classes; ++c) {
      ds.class_names.push_back(ds.domain_name + "/" + std::to_string(c));
    }
  }
  if (options.normalize && !ds.normalized) {
    normalize_rows(ds.features);
    ds.normalized = true;
  }
  return ds;
}

void normalize_rows(Matrix& features) {
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    const double norm = features.row(r).norm();
    if (norm > 0.0) features.row(r) /= norm;
  }
}

EmbeddingDataset select_rows(const EmbeddingDataset& dataset, std::span<const std::size_t> rows) {
  EmbeddingDataset out;
  out.domain_name = dataset.domain_name;
  out.class_names = dataset.class_names;
  out.role = dataset.role;
  out.normalized = dataset.normalized;
  out.notes = dataset.notes;
  out.prompt_template = dataset.prompt_template;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), dataset.features.cols());
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) =
        dataset.features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels[i] = dataset.labels.at(rows[i]);
  }
  return out;
}

EmbeddingDataset sample_few_shot(const EmbeddingDataset& dataset, int shots, std::uint64_t seed) {
  if (dataset.role != SplitRole::kTrain) {
    throw Error(ErrorCode::kInvalidArgument, "few-shot sampling needs a train split");
  }
  if (shots < 1) throw Error(ErrorCode::kInvalidArgument, "shots must be positive");

  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(dataset.num_classes()));
  for (std::size_t r = 0; r < dataset.labels.size(); ++r) {
    by_class.at(static_cast<std::size_t>(dataset.labels[r])).push_back(r);
  }
  Rng rng(seed);
  std::vector<std::size_t> chosen;
  for (auto& members : by_class) {
    const std::size_t take = std::min<std::size_t>(members.size(), static_cast<std::size_t>(shots));
    // Partial Fisher-Yates: the first `take` slots become the sample.
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(members[i], members[i + uniform_index(rng, members.size() - i)]);
    }
    chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(chosen.begin(), chosen.end());
  return select_rows(dataset, chosen);
}

}  // namespace rail
