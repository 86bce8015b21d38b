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

#ifndef RAIL_EMBEDDING_STORE_HPP_
#define RAIL_EMBEDDING_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rail/types.hpp"

namespace rail {

enum class SplitRole { kTrain, kTest, kText };

std::string_view to_string(SplitRole role);
SplitRole split_role_from_string(std::string_view name);

// One split of one domain. Labels are positions into `class_names`; the
// LabelRegistry maps them to global class indices.
struct EmbeddingDataset {
  std::string domain_name;
  Matrix features;  // n_samples x d
  std::vector<int> labels;
  std::vector<std::string> class_names;
  SplitRole role = SplitRole::kTrain;
  bool normalized = false;
  std::string notes;
  // Only meaningful for text tables.
  std::optional<std::string> prompt_template;

  std::size_t size() const { return labels.size(); }
  int dim() const { return static_cast<int>(features.cols()); }
  int num_classes() const { return static_cast<int>(class_names.size()); }

  // Throws DimensionMismatch, NonFiniteValue or LabelOutOfRange.
  void validate() const;
};

// Half-open range of global class indices owned by one domain.
struct ClassRange {
  ClassIndex begin = 0;
  ClassIndex end = 0;

  int size() const { return end - begin; }
  bool contains(ClassIndex c) const { return c >= begin && c < end; }
  std::vector<ClassIndex> indices() const;
};

// Global class index space across all domains. Registration is single-writer;
// the seen mask only ever flips from false to true.
class LabelRegistry {
 public:
  struct Entry {
    std::string class_name;
    std::string domain_name;
  };

  explicit LabelRegistry(int feature_dim);

  // Appends the classes with consecutive indices. Throws DuplicateClassName if
  // any name is already registered (or repeated within `class_names`).
  ClassRange register_domain(std::span<const std::string> class_names,
                             const std::string& domain_name);

  void mark_seen(const std::string& domain_name);
  void mark_seen(ClassRange range);

  int feature_dim() const { return feature_dim_; }
  int num_classes() const { return static_cast<int>(entries_.size()); }
  const Entry& entry(ClassIndex c) const { return entries_.at(c); }
  bool is_seen(ClassIndex c) const { return seen_.at(c); }
  const std::vector<bool>& seen_mask() const { return seen_; }
  std::vector<ClassIndex> seen_classes() const;
  std::optional<ClassIndex> find(const std::string& class_name) const;

  const std::vector<std::string>& domains() const { return domain_order_; }
  ClassRange domain_range(const std::string& domain_name) const;
  // Domain owning class `c`.
  const std::string& domain_of(ClassIndex c) const { return entries_.at(c).domain_name; }

  // Maps a dataset's local labels to global indices. The dataset's domain
  // must be registered with the same class list and feature dimension.
  std::vector<ClassIndex> to_global(const EmbeddingDataset& dataset) const;

 private:
  int feature_dim_;
  std::vector<Entry> entries_;
  std::vector<bool> seen_;
  std::vector<std::string> domain_order_;
  std::vector<ClassRange> domain_ranges_;
};

// Unit-norm text vector per global class index.
struct TextEmbeddingTable {
  Matrix vectors;  // n_classes x d
  std::string prompt_template = "A photo of a {}.";

  int num_classes() const { return static_cast<int>(vectors.rows()); }
  // Checks unit norm (1 +- 1e-6) and coverage of every registered class.
  void validate(const LabelRegistry& registry) const;
  // Rows for the given classes, in order.
  Matrix rows(std::span<const ClassIndex> classes) const;
};

struct DomainData {
  EmbeddingDataset train;
  EmbeddingDataset test;
  EmbeddingDataset text;  // one row per class, row i = class_names[i]
};

// A registered domain sequence: registry over C_N, text table over C_N, and
// the per-domain splits in learning order.
struct Benchmark {
  LabelRegistry registry{1};
  TextEmbeddingTable texts;
  std::vector<DomainData> domains;

  ClassRange classes_of(std::size_t domain) const {
    return registry.domain_range(domains.at(domain).train.domain_name);
  }
};

// Registers every domain in order and assembles the text table.
Benchmark assemble_benchmark(std::vector<DomainData> domains);

struct LoadOptions {
  // L2-normalize rows unless the file is already flagged as normalized.
  bool normalize = true;
};

std::filesystem::path manifest_path(const std::filesystem::path& path);

// Binary payload + JSON manifest sidecar (see README for the layout).
void save_embeddings(const std::filesystem::path& path, const EmbeddingDataset& dataset);
EmbeddingDataset load_embeddings(const std::filesystem::path& path,
                                 const LoadOptions& options = {});

// Row-wise L2 normalization in place; zero rows are left untouched.
void normalize_rows(Matrix& features);

// Per class, min(shots, available) samples drawn uniformly without
// replacement. Selected rows keep their original relative order.
EmbeddingDataset sample_few_shot(const EmbeddingDataset& dataset, int shots,
                                 std::uint64_t seed);

// Row subset helper used by sampling and validation splits.
EmbeddingDataset select_rows(const EmbeddingDataset& dataset,
                             std::span<const std::size_t> rows);

}  // namespace rail

#endif  // RAIL_EMBEDDING_STORE_HPP_
