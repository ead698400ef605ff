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

#include "clx/unifi.hpp"

#include <algorithm>
#include <set>

namespace clx {

std::string to_string(const StringExpression& e) {
  if (const auto* c = std::get_if<ConstStr>(&e)) return "ConstStr('" + c->text + "')";
  const auto& x = std::get<Extract>(e);
  if (x.from == x.to) return "Extract(" + std::to_string(x.from) + ")";
  return "Extract(" + std::to_string(x.from) + "," + std::to_string(x.to) + ")";
}

std::string to_string(const TransformationPlan& plan) {
  std::string out = "Concat(";
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (i) out += ',';
    out += to_string(plan.expressions[i]);
  }
  return out + ")";
}

namespace {

std::string apply_spans(const TransformationPlan& plan, std::string_view s,
                        std::span<const CharSpan> spans) {
  std::string out;
  for (const auto& e : plan.expressions) {
    if (const auto* c = std::get_if<ConstStr>(&e)) {
      out += c->text;
      continue;
    }
    const auto& x = std::get<Extract>(e);
    if (x.from < 1 || x.from > x.to || x.to > spans.size())
      throw EvalError("Extract(" + std::to_string(x.from) + "," +
                      std::to_string(x.to) + ") out of range for a " +
                      std::to_string(spans.size()) + "-token source");
    const std::size_t begin = spans[x.from - 1].begin;
    const std::size_t end = spans[x.to - 1].end;
    out.append(s.substr(begin, end - begin));
  }
  return out;
}

}  // namespace

std::string eval_plan(const TransformationPlan& plan, std::string_view s,
                      const Pattern& source) {
  const auto spans = match_spans(source, s);
  if (!spans)
    throw EvalError("'" + std::string(s) + "' does not match " + render_pattern(source));
  return apply_spans(plan, s, *spans);
}

std::string eval_plan(const TransformationPlan& plan, const TokenizedString& ts,
                      const Pattern& source) {
  return eval_plan(plan, ts.raw, source);
}

EvalResult eval_program(const UniFiProgram& program, std::string_view s) {
  for (std::size_t b = 0; b < program.branches.size(); ++b) {
    const auto& branch = program.branches[b];
    const auto spans = match_spans(branch.match, s);
    if (!spans) continue;
    return EvalResult{apply_spans(branch.plan, s, *spans), EvalStatus::Transformed, b};
  }
  return EvalResult{std::string(s), EvalStatus::Unmatched, std::nullopt};
}

void check_program(const UniFiProgram& program) {
  for (const auto& b : program.branches) {
    if (b.match.empty()) throw std::invalid_argument("branch with empty pattern");
    if (b.plan.expressions.empty()) throw std::invalid_argument("empty plan");
    for (const auto& e : b.plan.expressions) {
      const auto* x = std::get_if<Extract>(&e);
      if (x && (x->from < 1 || x->from > x->to || x->to > b.match.size()))
        throw std::invalid_argument("branch " + render_pattern(b.match) + ": " +
                                    to_string(e) + " out of range");
    }
  }
}

std::string ReplaceOperation::to_string() const {
  return "Replace '" + match_regex + "' in " + column + " with '" + replacement + "'";
}

ReplaceOperation explain_branch(const Branch& branch, std::string_view column) {
  // A plan item is either constant text or a (merged) one-based token span.
  struct Item {
    std::string text;
    std::optional<std::pair<std::size_t, std::size_t>> span;
  };
  std::vector<Item> items;
  for (const auto& e : branch.plan.expressions) {
    if (const auto* c = std::get_if<ConstStr>(&e)) {
      items.push_back({c->text, std::nullopt});
      continue;
    }
    const auto& x = std::get<Extract>(e);
    if (!items.empty() && items.back().span && items.back().span->second + 1 == x.from) {
      items.back().span->second = x.to;
      continue;
    }
    items.push_back({{}, std::pair{x.from, x.to}});
  }

  // Capture groups are the elementary segments cut by every span boundary,
  // so overlapping extracts still get disjoint groups.
  const std::size_t n = branch.match.size();
  std::vector<char> covered(n + 2, 0), cut(n + 2, 0);
  for (const auto& it : items) {
    if (!it.span) continue;
    const auto [from, to] = *it.span;
    if (from < 1 || to > n || from > to)
      throw std::invalid_argument("Extract out of range for " + render_pattern(branch.match));
    for (std::size_t k = from; k <= to; ++k) covered[k] = 1;
    cut[from] = 1;
    cut[to + 1] = 1;
  }
  std::vector<TokenRange> groups;          // zero-based
  std::vector<std::size_t> group_of(n + 2, 0);  // one-based position -> group no.
  for (std::size_t k = 1; k <= n; ++k) {
    if (!covered[k]) continue;
    if (groups.empty() || cut[k] || !covered[k - 1])
      groups.push_back(TokenRange{k - 1, k - 1});
    else
      groups.back().last = k - 1;
    group_of[k] = groups.size();
  }

  // Pieces: literal text or a group reference; "$k" followed by a digit is
  // written "$0k" so the engine does not read a two-digit group number.
  std::vector<std::variant<std::string, std::size_t>> pieces;
  for (const auto& it : items) {
    if (!it.span) {
      pieces.emplace_back(it.text);
      continue;
    }
    for (std::size_t g = group_of[it.span->first]; g <= group_of[it.span->second]; ++g)
      pieces.emplace_back(g);
  }
  std::string replacement;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (const auto* text = std::get_if<std::string>(&pieces[i])) {
      for (char c : *text) {
        if (c == '$') replacement += '$';
        replacement += c;
      }
      continue;
    }
    const std::size_t g = std::get<std::size_t>(pieces[i]);
    const auto* next = i + 1 < pieces.size() ? std::get_if<std::string>(&pieces[i + 1]) : nullptr;
    const bool digit_follows = next && !next->empty() && (*next)[0] >= '0' && (*next)[0] <= '9';
    replacement += '$';
    if (digit_follows && g < 10) replacement += '0';
    replacement += std::to_string(g);
  }

  return ReplaceOperation{render_regex(branch.match, groups), std::move(replacement),
                          std::string(column)};
}

std::vector<ReplaceOperation> explain(const UniFiProgram& program,
                                      std::span<const Pattern> source_patterns,
                                      std::string_view column) {
  std::vector<ReplaceOperation> out;
  for (const auto& b : program.branches) {
    if (std::find(source_patterns.begin(), source_patterns.end(), b.match) ==
        source_patterns.end())
      throw std::invalid_argument("branch pattern " + render_pattern(b.match) +
                                  " is not a known source pattern");
    out.push_back(explain_branch(b, column));
  }
  return out;
}

nlohmann::json to_json(const StringExpression& e) {
  if (const auto* c = std::get_if<ConstStr>(&e)) return {{"const", c->text}};
  const auto& x = std::get<Extract>(e);
  return {{"extract", {x.from, x.to}}};
}

nlohmann::json to_json(const TransformationPlan& plan) {
  auto j = nlohmann::json::array();
  for (const auto& e : plan.expressions) j.push_back(to_json(e));
  return j;
}

nlohmann::json to_json(const UniFiProgram& program) {
  auto branches = nlohmann::json::array();
  for (const auto& b : program.branches)
    branches.push_back({{"match", render_pattern(b.match)}, {"plan", to_json(b.plan)}});
  nlohmann::json j = {{"branches", std::move(branches)}};
  if (program.target) j["target"] = render_pattern(*program.target);
  return j;
}

TransformationPlan plan_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("plan must be a JSON array");
  TransformationPlan plan;
  for (const auto& e : j) {
    if (e.contains("const")) {
      plan.expressions.push_back(ConstStr{e.at("const").get<std::string>()});
    } else if (e.contains("extract")) {
      const auto& r = e.at("extract");
      if (!r.is_array() || r.size() != 2)
        throw std::invalid_argument("extract must be [from, to]");
      plan.expressions.push_back(
          Extract{r[0].get<std::size_t>(), r[1].get<std::size_t>()});
    } else {
      throw std::invalid_argument("plan step must be {const} or {extract}");
    }
  }
  return plan;
}

UniFiProgram program_from_json(const nlohmann::json& j) {
  UniFiProgram program;
  try {
    for (const auto& b : j.at("branches"))
      program.branches.push_back(
          Branch{parse_pattern(b.at("match").get<std::string>()), plan_from_json(b.at("plan"))});
    if (j.contains("target") && !j["target"].is_null())
      program.target = parse_pattern(j["target"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed program JSON: ") + e.what());
  }
  check_program(program);
  return program;
}

}  // namespace clx
