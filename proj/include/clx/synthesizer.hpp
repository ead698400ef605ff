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
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clx/pattern.hpp"
#include "clx/profiler.hpp"
#include "clx/unifi.hpp"
#include "json.hpp"

namespace clx {

// Per-class frequency check: the source must have at least as many tokens
// of every base class as the target's base tokens. Source constants count
// as the characters they hold.
bool validate(const Pattern& source, const Pattern& target);

// Whether source token `s` can be extracted to produce target token `t`.
// The target must be a base token. The source is a base token of the same
// class, or a constant that tokenizes to one such token. Natural
// quantifiers must be equal, except that a Plus target accepts any.
bool syntactically_similar(const Token& s, const Token& t);

struct AlignmentDag {
  using Edge = std::pair<std::size_t, std::size_t>;

  std::size_t node_count = 1;  // target length + 1
  std::map<Edge, std::set<StringExpression>> edges;

  std::size_t target_node() const { return node_count - 1; }
  bool add(std::size_t from, std::size_t to, StringExpression e);
  const std::set<StringExpression>* at(std::size_t from, std::size_t to) const;
};

AlignmentDag find_token_alignment(const Pattern& source, const Pattern& target);

double description_length(const TransformationPlan& plan, const Pattern& source,
                          const Pattern& target);

struct PathEnumeration {
  std::vector<TransformationPlan> plans;
  bool overflow = false;
};

inline constexpr std::size_t kDefaultPathCap = 10000;

// Every 0 -> target path, breadth first, at most `cap` of them.
PathEnumeration all_paths(const AlignmentDag& dag, std::size_t cap = kDefaultPathCap);

// Canonical form used for equivalence: unit extracts of base tokens and
// single constant characters (an extract of a literal source token is the
// literal's text).
std::vector<StringExpression> canonical_form(const TransformationPlan& plan,
                                             const Pattern& source);
bool plans_equivalent(const TransformationPlan& a, const TransformationPlan& b,
                      const Pattern& source);

struct RankedPlan {
  TransformationPlan plan;
  double dl = 0;
};

struct RankedPlans {
  Pattern source;
  std::optional<std::size_t> node;  // hierarchy node, when synthesized from one
  std::vector<RankedPlan> plans;
  std::size_t default_index = 0;
  bool overflow = false;

  const TransformationPlan& chosen() const { return plans.at(default_index).plan; }
};

struct SynthesisOptions {
  std::size_t k = 5;
  std::size_t path_cap = kDefaultPathCap;
};

// Deduplicated plans ordered by description length, then fewer
// expressions, fewer constant characters, fewer reused source tokens, fewer
// order inversions, and finally the JSON text. Keeps the top k + 1.
RankedPlans enumerate_plans(const AlignmentDag& dag, const Pattern& source,
                            const Pattern& target,
                            const SynthesisOptions& options = {});

struct SynthesisResult {
  Pattern target;
  UniFiProgram program;
  std::vector<RankedPlans> per_source;
  std::vector<Pattern> unmatched_patterns;
};

SynthesisResult synthesize(const PatternHierarchy& h, const Pattern& target,
                           const SynthesisOptions& options = {});

class RepairError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SynthesisResult repair(const SynthesisResult& result, const Pattern& source,
                       std::size_t chosen);

std::vector<ReplaceOperation> explain(const SynthesisResult& result,
                                      std::string_view column);

// {target, script, branches: [{source, node, default, default_index,
//  overflow, alternates: [{index, plan, dl}]}], unmatched}
nlohmann::json to_json(const SynthesisResult& result, std::string_view column);

}  // namespace clx
