// Copyright 2026 The clx authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clx/pattern.hpp"
#include "json.hpp"

namespace clx {

using RowId = std::size_t;

struct TokenSpan {
  Token token;
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct TokenizedString {
  std::string raw;
  std::vector<TokenSpan> tokens;

  bool empty_pattern() const { return tokens.empty(); }
  Pattern pattern() const;
  std::string_view text(std::size_t token_index) const {
    const auto& t = tokens[token_index];
    return std::string_view(raw).substr(t.offset, t.length);
  }
};

// Leaf tokenization: every non-alphanumeric character is its own literal
// token (a multi-byte UTF-8 sequence counts as one character); maximal runs
// of digits / lowercase / uppercase become <D>n / <L>n / <U>n. An empty
// string yields an empty token list.
TokenizedString tokenize(std::string_view s);

struct PatternCluster {
  Pattern pattern;
  std::vector<RowId> members;

  std::size_t count() const { return members.size(); }
};

// One cluster per distinct leaf pattern, ordered by count descending then by
// rendered pattern. Empty rows are left out.
std::vector<PatternCluster> cluster_initial(std::span<const std::string> rows);

struct ConstantOptions {
  double threshold = 1.0;  // fraction of members sharing a value
  std::size_t min_cluster_size = 2;
};

struct ConstantDiscovery {
  PatternCluster cluster;
  // Members that disagree with a discovered constant (only when
  // threshold < 1); they keep the original leaf pattern.
  std::optional<PatternCluster> residual;
};

ConstantDiscovery discover_constants(const PatternCluster& cluster,
                                     std::span<const std::string> rows,
                                     const ConstantOptions& options = {});

enum class Strategy {
  QuantifierToPlus = 1,  // natural quantifiers > 1 become '+'
  CaseToAlpha = 2,       // <L>, <U> become <A>
  ToAlphaNumeric = 3,    // <A>, <D>, '-', '_' become <AN>
};

Pattern get_parent(const Pattern& p, Strategy strategy);

struct RefineResult {
  std::vector<PatternCluster> parents;
  // children[k] indexes the input clusters assigned to parents[k].
  std::vector<std::vector<std::size_t>> children;
  std::size_t get_parent_calls = 0;
  std::size_t greedy_iterations = 0;
};

RefineResult refine(std::span<const PatternCluster> clusters, Strategy strategy);

struct HierarchyNode {
  PatternCluster cluster;
  int layer = 0;  // 0 = leaf, 1..3 = refinement layers
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
};

struct ProfileOptions {
  ConstantOptions constants;
};

class PatternHierarchy {
 public:
  static constexpr int kLayers = 4;

  const std::vector<HierarchyNode>& nodes() const { return nodes_; }
  const HierarchyNode& node(std::size_t id) const { return nodes_.at(id); }
  const std::vector<std::size_t>& roots() const { return roots_; }
  const std::vector<RowId>& empty_rows() const { return empty_rows_; }
  std::vector<std::size_t> layer(int index) const;
  std::vector<std::size_t> leaves() const { return layer(0); }
  bool empty() const { return nodes_.empty(); }

 private:
  friend PatternHierarchy build_hierarchy(std::span<const std::string>,
                                          const ProfileOptions&);
  std::vector<HierarchyNode> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<RowId> empty_rows_;
};

// Leaves from tokenization and constant discovery, then three refinement
// layers with strategies 1, 2, 3 in order.
PatternHierarchy build_hierarchy(std::span<const std::string> rows,
                                 const ProfileOptions& options = {});

// {pattern, regex, count, sample, ...} for one cluster.
nlohmann::json cluster_to_json(const PatternCluster& cluster,
                               std::span<const std::string> rows);
// {roots: [{id, layer, pattern, regex, count, sample, children}], empty: n}
nlohmann::json to_json(const PatternHierarchy& h,
                       std::span<const std::string> rows);

}  // namespace clx
