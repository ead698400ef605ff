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

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clx/pattern.hpp"
#include "clx/profiler.hpp"
#include "json.hpp"

// The transformation language: a Switch over (Match(pattern), plan) branches
// where a plan concatenates constant strings and extracts of source tokens.
namespace clx {

struct ConstStr {
  std::string text;
  friend bool operator==(const ConstStr&, const ConstStr&) = default;
  friend auto operator<=>(const ConstStr&, const ConstStr&) = default;
};

// One-based, inclusive token range of the source pattern. Literal tokens
// count toward the index like base tokens.
struct Extract {
  std::size_t from = 1;
  std::size_t to = 1;
  friend bool operator==(const Extract&, const Extract&) = default;
  friend auto operator<=>(const Extract&, const Extract&) = default;
};

using StringExpression = std::variant<ConstStr, Extract>;

struct TransformationPlan {
  std::vector<StringExpression> expressions;

  TransformationPlan() = default;
  TransformationPlan(std::initializer_list<StringExpression> init)
      : expressions(init) {}
  explicit TransformationPlan(std::vector<StringExpression> e)
      : expressions(std::move(e)) {}

  std::size_t size() const { return expressions.size(); }
  friend bool operator==(const TransformationPlan&,
                         const TransformationPlan&) = default;
};

struct Branch {
  Pattern match;
  TransformationPlan plan;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct UniFiProgram {
  std::vector<Branch> branches;
  // Target pattern the program was synthesized for, when known. Strings
  // already matching it are left alone by apply_program.
  std::optional<Pattern> target;
  friend bool operator==(const UniFiProgram&, const UniFiProgram&) = default;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const StringExpression& e);
std::string to_string(const TransformationPlan& plan);

// Throws EvalError when the string does not match `source` or an Extract
// index is out of range.
std::string eval_plan(const TransformationPlan& plan, std::string_view s,
                      const Pattern& source);
std::string eval_plan(const TransformationPlan& plan, const TokenizedString& ts,
                      const Pattern& source);

enum class EvalStatus { Transformed, Unmatched };

struct EvalResult {
  std::string output;
  EvalStatus status = EvalStatus::Unmatched;
  std::optional<std::size_t> branch;
};

// First branch whose pattern matches `s` wins; no match leaves `s` as is.
EvalResult eval_program(const UniFiProgram& program, std::string_view s);

// Throws std::invalid_argument on empty plans or out-of-range Extracts.
void check_program(const UniFiProgram& program);

struct ReplaceOperation {
  std::string match_regex;
  std::string replacement;
  std::string column;

  // Replace '<regex>' in <column> with '<replacement>'
  std::string to_string() const;
};

ReplaceOperation explain_branch(const Branch& branch, std::string_view column);
std::vector<ReplaceOperation> explain(const UniFiProgram& program,
                                      std::span<const Pattern> source_patterns,
                                      std::string_view column);

nlohmann::json to_json(const StringExpression& e);
nlohmann::json to_json(const TransformationPlan& plan);
nlohmann::json to_json(const UniFiProgram& program);
TransformationPlan plan_from_json(const nlohmann::json& j);
UniFiProgram program_from_json(const nlohmann::json& j);

}  // namespace clx
