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

#include "clx/synthesizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>

namespace clx {

namespace {

// Base-class frequency with constant literals counted as the characters
// they were discovered from ("586" adds 3 to Digit).
std::size_t class_frequency(TokenKind k, const Pattern& p) {
  std::size_t total = token_frequency(k, p);
  for (const auto& t : p.tokens)
    if (t.is_literal()) total += token_frequency(k, tokenize(t.cls.literal).pattern());
  return total;
}

}  // namespace

// Target constants come from ConstStr, so only the target's base tokens
// need a supply in the source.
bool validate(const Pattern& source, const Pattern& target) {
  for (TokenKind k : kBaseKinds)
    if (class_frequency(k, source) < token_frequency(k, target)) return false;
  return true;
}

bool syntactically_similar(const Token& s, const Token& t) {
  if (t.is_literal()) return false;
  if (s.is_literal()) {
    // A constant stands in for the single base token it was discovered from.
    const auto ts = tokenize(s.cls.literal);
    if (ts.tokens.size() != 1 || ts.tokens[0].token.is_literal()) return false;
    return syntactically_similar(ts.tokens[0].token, t);
  }
  if (s.kind() != t.kind()) return false;
  if (t.quantifier.is_plus()) return true;
  return !s.quantifier.is_plus() && s.quantifier.count() == t.quantifier.count();
}

bool AlignmentDag::add(std::size_t from, std::size_t to, StringExpression e) {
  return edges[{from, to}].insert(std::move(e)).second;
}

const std::set<StringExpression>* AlignmentDag::at(std::size_t from, std::size_t to) const {
  const auto it = edges.find({from, to});
  return it == edges.end() ? nullptr : &it->second;
}

AlignmentDag find_token_alignment(const Pattern& source, const Pattern& target) {
  AlignmentDag dag;
  const std::size_t m = target.size();
  dag.node_count = m + 1;
  for (std::size_t i = 0; i < m; ++i) {
    const Token& t = target[i];
    if (t.is_literal()) {
      dag.add(i, i + 1, ConstStr{t.cls.literal});
      continue;
    }
    for (std::size_t j = 0; j < source.size(); ++j)
      if (syntactically_similar(source[j], t)) dag.add(i, i + 1, Extract{j + 1, j + 1});
  }

  // Sequential extracts: an extract into node i ending at source token q-1
  // followed by the unit extract of token q out of node i.
  for (std::size_t i = 1; i < m; ++i) {
    const auto* out = dag.at(i, i + 1);
    if (!out) continue;
    std::vector<Extract> units;
    for (const auto& e : *out)
      if (const auto* x = std::get_if<Extract>(&e)) units.push_back(*x);
    if (units.empty()) continue;
    for (std::size_t a = 0; a < i; ++a) {
      const auto* in = dag.at(a, i);
      if (!in) continue;
      std::vector<Extract> incoming;
      for (const auto& e : *in)
        if (const auto* x = std::get_if<Extract>(&e)) incoming.push_back(*x);
      for (const auto& x : incoming)
        for (const auto& u : units)
          if (x.to + 1 == u.from) dag.add(a, i + 1, Extract{x.from, u.to});
    }
  }
  return dag;
}

double description_length(const TransformationPlan& plan, const Pattern& source,
                          const Pattern&) {
  if (plan.expressions.empty()) return 0;
  bool has_const = false, has_extract = false;
  const double n = static_cast<double>(source.size());
  double data = 0;
  for (const auto& e : plan.expressions) {
    if (const auto* c = std::get_if<ConstStr>(&e)) {
      has_const = true;
      data += static_cast<double>(c->text.size()) * std::log2(95.0);
    } else {
      has_extract = true;
      data += std::log2(n * n);
    }
  }
  const double kinds = (has_const ? 1 : 0) + (has_extract ? 1 : 0);
  return static_cast<double>(plan.size()) * std::log2(kinds) + data;
}

PathEnumeration all_paths(const AlignmentDag& dag, std::size_t cap) {
  PathEnumeration result;
  const std::size_t target = dag.target_node();
  if (target == 0) {
    result.plans.emplace_back();
    return result;
  }

  std::vector<char> alive(dag.node_count, 0);
  alive[target] = 1;
  for (std::size_t v = target; v-- > 0;) {
    for (auto it = dag.edges.lower_bound({v, 0}); it != dag.edges.end() && it->first.first == v;
         ++it)
      if (!it->second.empty() && alive[it->first.second]) {
        alive[v] = 1;
        break;
      }
  }
  if (!alive[0]) return result;

  struct Partial {
    std::size_t node;
    std::vector<StringExpression> steps;
  };
  std::deque<Partial> queue;
  queue.push_back({0, {}});
  // Dead ends are pruned, so every queued path completes at least once and
  // completed + queued bounds the final count from below.
  while (!queue.empty()) {
    Partial cur = std::move(queue.front());
    queue.pop_front();
    if (cur.node == target) {
      result.plans.emplace_back(std::move(cur.steps));
      continue;
    }
    for (auto it = dag.edges.lower_bound({cur.node, 0});
         it != dag.edges.end() && it->first.first == cur.node; ++it) {
      if (!alive[it->first.second]) continue;
      for (const auto& e : it->second) {
        if (result.plans.size() + queue.size() + 1 > cap) {
          result.overflow = true;
          continue;
        }
        auto steps = cur.steps;
        steps.push_back(e);
        queue.push_back({it->first.second, std::move(steps)});
      }
    }
  }
  return result;
}

std::vector<StringExpression> canonical_form(const TransformationPlan& plan,
                                             const Pattern& source) {
  std::vector<StringExpression> out;
  auto push_text = [&](const std::string& text) {
    for (char c : text) out.emplace_back(ConstStr{std::string(1, c)});
  };
  for (const auto& e : plan.expressions) {
    if (const auto* c = std::get_if<ConstStr>(&e)) {
      push_text(c->text);
      continue;
    }
    const auto& x = std::get<Extract>(e);
    for (std::size_t q = x.from; q <= x.to; ++q) {
      if (q >= 1 && q <= source.size() && source[q - 1].is_literal())
        push_text(source[q - 1].cls.literal);
      else
        out.emplace_back(Extract{q, q});
    }
  }
  return out;
}

bool plans_equivalent(const TransformationPlan& a, const TransformationPlan& b,
                      const Pattern& source) {
  return canonical_form(a, source) == canonical_form(b, source);
}

namespace {

struct RankKey {
  double dl;
  std::size_t expressions;
  std::size_t const_chars;
  std::size_t reused;
  std::size_t inversions;
  std::string text;
};

RankKey rank_key(const TransformationPlan& plan, const Pattern& source, const Pattern& target) {
  RankKey k{description_length(plan, source, target), plan.size(), 0, 0, 0,
            to_json(plan).dump()};
  std::vector<std::size_t> seen(source.size() + 2, 0);
  std::vector<std::size_t> starts;
  for (const auto& e : plan.expressions) {
    if (const auto* c = std::get_if<ConstStr>(&e)) {
      k.const_chars += c->text.size();
      continue;
    }
    const auto& x = std::get<Extract>(e);
    for (std::size_t q = x.from; q <= x.to && q < seen.size(); ++q)
      if (seen[q]++) ++k.reused;
    for (std::size_t s : starts)
      if (s > x.from) ++k.inversions;
    starts.push_back(x.from);
  }
  return k;
}

bool rank_less(const RankKey& a, const RankKey& b) {
  constexpr double kEps = 1e-9;
  if (std::abs(a.dl - b.dl) > kEps) return a.dl < b.dl;
  return std::tie(a.expressions, a.const_chars, a.reused, a.inversions, a.text) <
         std::tie(b.expressions, b.const_chars, b.reused, b.inversions, b.text);
}

}  // namespace

RankedPlans enumerate_plans(const AlignmentDag& dag, const Pattern& source,
                            const Pattern& target, const SynthesisOptions& options) {
  RankedPlans ranked;
  ranked.source = source;
  auto paths = all_paths(dag, options.path_cap);
  ranked.overflow = paths.overflow;

  std::vector<std::pair<RankKey, std::size_t>> order;
  order.reserve(paths.plans.size());
  for (std::size_t i = 0; i < paths.plans.size(); ++i)
    order.emplace_back(rank_key(paths.plans[i], source, target), i);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return rank_less(a.first, b.first); });

  std::set<std::vector<StringExpression>> kept;
  for (const auto& [key, i] : order) {
    if (ranked.plans.size() >= options.k + 1) break;
    if (!kept.insert(canonical_form(paths.plans[i], source)).second) continue;
    ranked.plans.push_back(RankedPlan{std::move(paths.plans[i]), key.dl});
  }
  return ranked;
}

SynthesisResult synthesize(const PatternHierarchy& h, const Pattern& target,
                           const SynthesisOptions& options) {
  SynthesisResult result;
  result.target = target;

  auto note_unmatched = [&](const Pattern& p) {
    if (std::find(result.unmatched_patterns.begin(), result.unmatched_patterns.end(), p) ==
        result.unmatched_patterns.end())
      result.unmatched_patterns.push_back(p);
  };

  std::function<void(std::size_t)> visit = [&](std::size_t id) {
    const HierarchyNode& node = h.node(id);
    const Pattern& p = node.cluster.pattern;
    if (covers(target, p)) return;
    if (validate(p, target)) {
      auto ranked = enumerate_plans(find_token_alignment(p, target), p, target, options);
      if (!ranked.plans.empty()) {
        const bool dup = std::any_of(result.per_source.begin(), result.per_source.end(),
                                     [&](const RankedPlans& r) { return r.source == p; });
        if (!dup) {
          ranked.node = id;
          result.per_source.push_back(std::move(ranked));
        }
        return;
      }
    }
    if (node.children.empty()) {
      note_unmatched(p);
      return;
    }
    for (std::size_t c : node.children) visit(c);
  };
  for (std::size_t root : h.roots()) visit(root);

  // Most specific first.
  std::stable_sort(result.per_source.begin(), result.per_source.end(),
                   [&](const RankedPlans& a, const RankedPlans& b) {
                     const auto& na = h.node(*a.node);
                     const auto& nb = h.node(*b.node);
                     if (na.layer != nb.layer) return na.layer < nb.layer;
                     if (na.cluster.count() != nb.cluster.count())
                       return na.cluster.count() > nb.cluster.count();
                     return render_pattern(a.source) < render_pattern(b.source);
                   });

  result.program.target = target;
  for (const auto& r : result.per_source)
    result.program.branches.push_back(Branch{r.source, r.chosen()});
  return result;
}

SynthesisResult repair(const SynthesisResult& result, const Pattern& source,
                       std::size_t chosen) {
  const auto it = std::find_if(result.per_source.begin(), result.per_source.end(),
                               [&](const RankedPlans& r) { return r.source == source; });
  if (it == result.per_source.end())
    throw RepairError("no branch for source pattern " + render_pattern(source));
  if (chosen >= it->plans.size())
    throw RepairError("alternate " + std::to_string(chosen) + " out of range (" +
                      std::to_string(it->plans.size()) + " plans)");
  SynthesisResult out = result;
  const auto idx = static_cast<std::size_t>(it - result.per_source.begin());
  out.per_source[idx].default_index = chosen;
  out.program.branches[idx].plan = out.per_source[idx].plans[chosen].plan;
  return out;
}

std::vector<ReplaceOperation> explain(const SynthesisResult& result, std::string_view column) {
  std::vector<ReplaceOperation> ops;
  for (const auto& b : result.program.branches) ops.push_back(explain_branch(b, column));
  return ops;
}

nlohmann::json to_json(const SynthesisResult& result, std::string_view column) {
  auto script = nlohmann::json::array();
  for (const auto& op : explain(result, column)) script.push_back(op.to_string());
  auto branches = nlohmann::json::array();
  for (const auto& r : result.per_source) {
    auto alternates = nlohmann::json::array();
    for (std::size_t i = 0; i < r.plans.size(); ++i)
      alternates.push_back({{"index", i},
                            {"plan", to_json(r.plans[i].plan)},
                            {"text", to_string(r.plans[i].plan)},
                            {"dl", r.plans[i].dl}});
    nlohmann::json b = {{"source", render_pattern(r.source)},
                        {"default", to_json(r.chosen())},
                        {"default_index", r.default_index},
                        {"overflow", r.overflow},
                        {"alternates", std::move(alternates)}};
    if (r.node) b["node"] = *r.node;
    branches.push_back(std::move(b));
  }
  auto unmatched = nlohmann::json::array();
  for (const auto& p : result.unmatched_patterns) unmatched.push_back(render_pattern(p));
  return {{"target", render_pattern(result.target)},
          {"script", std::move(script)},
          {"branches", std::move(branches)},
          {"unmatched", std::move(unmatched)}};
}

}  // namespace clx
