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

#include "clx/profiler.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace clx {

namespace {

TokenKind char_kind(char c) {
  if (c >= '0' && c <= '9') return TokenKind::Digit;
  if (c >= 'a' && c <= 'z') return TokenKind::Lower;
  if (c >= 'A' && c <= 'Z') return TokenKind::Upper;
  return TokenKind::Literal;
}

// Length of the UTF-8 sequence starting at s[i]; invalid bytes count as 1.
std::size_t utf8_length(std::string_view s, std::size_t i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t len = 1;
  if ((lead & 0xE0) == 0xC0)
    len = 2;
  else if ((lead & 0xF0) == 0xE0)
    len = 3;
  else if ((lead & 0xF8) == 0xF0)
    len = 4;
  if (len == 1 || i + len > s.size()) return 1;
  for (std::size_t k = 1; k < len; ++k)
    if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return 1;
  return len;
}

}  // namespace

Pattern TokenizedString::pattern() const {
  Pattern p;
  p.tokens.reserve(tokens.size());
  for (const auto& t : tokens) p.tokens.push_back(t.token);
  return p;
}

TokenizedString tokenize(std::string_view s) {
  TokenizedString ts;
  ts.raw = std::string(s);
  std::size_t i = 0;
  while (i < s.size()) {
    const TokenKind kind = char_kind(s[i]);
    if (kind == TokenKind::Literal) {
      const std::size_t len = utf8_length(s, i);
      ts.tokens.push_back({Token::literal(std::string(s.substr(i, len))), i, len});
      i += len;
      continue;
    }
    std::size_t j = i + 1;
    while (j < s.size() && char_kind(s[j]) == kind) ++j;
    ts.tokens.push_back(
        {Token::base(kind, static_cast<std::uint32_t>(j - i)), i, j - i});
    i = j;
  }
  return ts;
}

std::vector<PatternCluster> cluster_initial(std::span<const std::string> rows) {
  std::map<Pattern, std::vector<RowId>> groups;
  for (RowId r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) continue;
    groups[tokenize(rows[r]).pattern()].push_back(r);
  }
  std::vector<PatternCluster> out;
  out.reserve(groups.size());
  for (auto& [pattern, members] : groups)
    out.push_back(PatternCluster{pattern, std::move(members)});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.count() != b.count()) return a.count() > b.count();
    return render_pattern(a.pattern) < render_pattern(b.pattern);
  });
  return out;
}

ConstantDiscovery discover_constants(const PatternCluster& cluster,
                                     std::span<const std::string> rows,
                                     const ConstantOptions& options) {
  ConstantDiscovery result{cluster, std::nullopt};
  if (cluster.count() < std::max<std::size_t>(options.min_cluster_size, 1))
    return result;

  const std::size_t n_tokens = cluster.pattern.size();
  std::vector<TokenizedString> members;
  members.reserve(cluster.count());
  for (RowId r : cluster.members) {
    members.push_back(tokenize(rows[r]));
    if (members.back().tokens.size() != n_tokens) return result;  // not a leaf
  }

  // Most frequent realized value per base token.
  std::vector<std::optional<std::string>> constant(n_tokens);
  for (std::size_t i = 0; i < n_tokens; ++i) {
    if (cluster.pattern[i].is_literal()) continue;
    std::unordered_map<std::string_view, std::size_t> freq;
    for (const auto& m : members) ++freq[m.text(i)];
    const auto best = std::max_element(
        freq.begin(), freq.end(), [](const auto& a, const auto& b) {
          return a.second != b.second ? a.second < b.second : a.first > b.first;
        });
    const double share =
        static_cast<double>(best->second) / static_cast<double>(members.size());
    if (share >= options.threshold) constant[i] = std::string(best->first);
  }
  if (std::none_of(constant.begin(), constant.end(),
                   [](const auto& c) { return c.has_value(); }))
    return result;

  PatternCluster kept{{}, {}};
  PatternCluster residual{cluster.pattern, {}};
  for (std::size_t m = 0; m < members.size(); ++m) {
    bool agrees = true;
    for (std::size_t i = 0; i < n_tokens && agrees; ++i)
      if (constant[i] && members[m].text(i) != *constant[i]) agrees = false;
    (agrees ? kept : residual).members.push_back(cluster.members[m]);
  }

  // Constant base tokens become literals; runs of them join into a single
  // literal, and a trailing '.' joins an alphabetic run ("Dr.").
  std::vector<Token> tokens;
  bool prev_constant = false;
  for (std::size_t i = 0; i < n_tokens; ++i) {
    const Token& t = cluster.pattern[i];
    if (constant[i]) {
      if (prev_constant)
        tokens.back().cls.literal += *constant[i];
      else
        tokens.push_back(Token::literal(*constant[i]));
      prev_constant = true;
      continue;
    }
    const bool alphabetic_run = prev_constant && !tokens.back().cls.literal.empty() &&
                                char_in_class(TokenKind::Alpha,
                                              tokens.back().cls.literal.back());
    if (alphabetic_run && t.is_literal() && t.cls.literal == ".") {
      tokens.back().cls.literal += '.';
      prev_constant = false;
      continue;
    }
    tokens.push_back(t);
    prev_constant = false;
  }
  kept.pattern = Pattern(std::move(tokens));
  result.cluster = std::move(kept);
  if (!residual.members.empty()) result.residual = std::move(residual);
  return result;
}

Pattern get_parent(const Pattern& p, Strategy strategy) {
  Pattern out;
  for (Token t : p.tokens) {
    switch (strategy) {
      case Strategy::QuantifierToPlus:
        if (!t.is_literal() && !t.quantifier.is_plus() && t.quantifier.count() > 1)
          t.quantifier = Quantifier::plus();
        break;
      case Strategy::CaseToAlpha:
        if (t.kind() == TokenKind::Lower || t.kind() == TokenKind::Upper)
          t.cls = TokenClass::base(TokenKind::Alpha);
        break;
      case Strategy::ToAlphaNumeric:
        if (t.kind() == TokenKind::Alpha || t.kind() == TokenKind::Digit)
          t.cls = TokenClass::base(TokenKind::AlphaNumeric);
        else if (t.is_literal() && (t.cls.literal == "-" || t.cls.literal == "_"))
          t = Token::base(TokenKind::AlphaNumeric);
        break;
    }
    if (!out.empty() && !t.is_literal() && out.tokens.back().cls == t.cls) {
      Quantifier& q = out.tokens.back().quantifier;
      if (q.is_plus() || t.quantifier.is_plus())
        q = Quantifier::plus();
      else
        q = Quantifier::exactly(q.count() + t.quantifier.count());
      continue;
    }
    out.tokens.push_back(std::move(t));
  }
  return out;
}

namespace {

// Literals other than '-' and '_' can only be covered by an identical
// literal, so a parent and a child it covers share this sequence.
std::vector<std::string> rigid_literals(const Pattern& p) {
  std::vector<std::string> out;
  for (const auto& t : p.tokens)
    if (t.is_literal() && t.cls.literal != "-" && t.cls.literal != "_")
      out.push_back(t.cls.literal);
  return out;
}

}  // namespace

RefineResult refine(std::span<const PatternCluster> clusters, Strategy strategy) {
  RefineResult result;

  struct Candidate {
    Pattern pattern;
    std::string rendered;
    std::size_t raw_count = 0;
    std::size_t members = 0;
  };
  std::map<Pattern, std::size_t> index;
  std::vector<Candidate> candidates;
  for (const auto& c : clusters) {
    Pattern parent = get_parent(c.pattern, strategy);
    ++result.get_parent_calls;
    auto [it, inserted] = index.try_emplace(parent, candidates.size());
    if (inserted) candidates.push_back({parent, render_pattern(parent), 0, 0});
    auto& cand = candidates[it->second];
    ++cand.raw_count;
    cand.members += c.count();
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.raw_count != b.raw_count) return a.raw_count > b.raw_count;
              if (a.members != b.members) return a.members > b.members;
              return a.rendered < b.rendered;
            });

  std::map<std::vector<std::string>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < clusters.size(); ++i)
    buckets[rigid_literals(clusters[i].pattern)].push_back(i);

  std::vector<char> assigned(clusters.size(), 0);
  std::size_t remaining = clusters.size();
  for (const auto& cand : candidates) {
    if (remaining == 0) break;
    ++result.greedy_iterations;
    auto bucket = buckets.find(rigid_literals(cand.pattern));
    if (bucket == buckets.end()) continue;
    std::vector<std::size_t> children;
    for (std::size_t i : bucket->second)
      if (!assigned[i] && covers(cand.pattern, clusters[i].pattern))
        children.push_back(i);
    if (children.empty()) continue;

    PatternCluster parent{cand.pattern, {}};
    for (std::size_t i : children) {
      assigned[i] = 1;
      --remaining;
      const auto& m = clusters[i].members;
      parent.members.insert(parent.members.end(), m.begin(), m.end());
    }
    std::sort(parent.members.begin(), parent.members.end());
    result.parents.push_back(std::move(parent));
    result.children.push_back(std::move(children));
  }
  return result;
}

std::vector<std::size_t> PatternHierarchy::layer(int index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].layer == index) out.push_back(i);
  return out;
}

PatternHierarchy build_hierarchy(std::span<const std::string> rows,
                                 const ProfileOptions& options) {
  PatternHierarchy h;
  for (RowId r = 0; r < rows.size(); ++r)
    if (rows[r].empty()) h.empty_rows_.push_back(r);

  std::vector<PatternCluster> leaves;
  for (const auto& c : cluster_initial(rows)) {
    auto found = discover_constants(c, rows, options.constants);
    leaves.push_back(std::move(found.cluster));
    if (found.residual) leaves.push_back(std::move(*found.residual));
  }
  std::stable_sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) {
    if (a.count() != b.count()) return a.count() > b.count();
    return render_pattern(a.pattern) < render_pattern(b.pattern);
  });
  if (leaves.empty()) return h;

  std::vector<std::size_t> current;
  for (auto& c : leaves) {
    current.push_back(h.nodes_.size());
    h.nodes_.push_back(HierarchyNode{std::move(c), 0, {}, std::nullopt});
  }

  constexpr Strategy kOrder[] = {Strategy::QuantifierToPlus, Strategy::CaseToAlpha,
                                 Strategy::ToAlphaNumeric};
  for (int layer = 1; layer < PatternHierarchy::kLayers; ++layer) {
    std::vector<PatternCluster> inputs;
    inputs.reserve(current.size());
    for (std::size_t id : current) inputs.push_back(h.nodes_[id].cluster);
    auto refined = refine(inputs, kOrder[layer - 1]);

    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < refined.parents.size(); ++k) {
      const std::size_t id = h.nodes_.size();
      HierarchyNode node{std::move(refined.parents[k]), layer, {}, std::nullopt};
      for (std::size_t child : refined.children[k]) {
        node.children.push_back(current[child]);
        h.nodes_[current[child]].parent = id;
      }
      h.nodes_.push_back(std::move(node));
      next.push_back(id);
    }
    current = std::move(next);
  }
  h.roots_ = std::move(current);
  return h;
}

nlohmann::json cluster_to_json(const PatternCluster& cluster,
                               std::span<const std::string> rows) {
  nlohmann::json sample = nlohmann::json::array();
  for (std::size_t i = 0; i < cluster.members.size() && i < 5; ++i)
    sample.push_back(rows[cluster.members[i]]);
  return {{"pattern", render_pattern(cluster.pattern)},
          {"regex", render_regex(cluster.pattern)},
          {"count", cluster.count()},
          {"sample", std::move(sample)}};
}

namespace {

nlohmann::json node_to_json(const PatternHierarchy& h, std::size_t id,
                            std::span<const std::string> rows) {
  const auto& node = h.node(id);
  auto j = cluster_to_json(node.cluster, rows);
  j["id"] = id;
  j["layer"] = node.layer;
  auto children = nlohmann::json::array();
  for (std::size_t c : node.children) children.push_back(node_to_json(h, c, rows));
  j["children"] = std::move(children);
  return j;
}

}  // namespace

nlohmann::json to_json(const PatternHierarchy& h, std::span<const std::string> rows) {
  auto roots = nlohmann::json::array();
  for (std::size_t r : h.roots()) roots.push_back(node_to_json(h, r, rows));
  return {{"roots", std::move(roots)}, {"empty", h.empty_rows().size()}};
}

}  // namespace clx
