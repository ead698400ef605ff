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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "clx/pattern.hpp"
#include "clx/unifi.hpp"

namespace clx::testing {

// Natural-language regex -> ECMAScript for std::regex.
std::string to_ecma(const std::string& nl_regex);

// Reference replace: what the rendered operation does under std::regex.
std::string reference_replace(const ReplaceOperation& op, const std::string& input);

// Every concatenation of Extract(i,j) over any source range and ConstStr
// of a target literal whose pieces produce the target tokens one to one.
std::vector<TransformationPlan> brute_force_plans(const Pattern& source, const Pattern& target);

// Random patterns whose adjacent tokens have disjoint character sets.
struct PatternGen {
  std::size_t min_tokens = 1;
  std::size_t max_tokens = 5;
  bool wide_classes = true;      // allow <A> and <AN>
  bool alnum_constants = false;  // allow constants like "586" / "CPT"
  std::string symbols = "-/.:@ ,";
};
Pattern random_pattern(std::mt19937& rng, const PatternGen& gen);

// A string the pattern matches; Plus tokens get 1..4 characters.
std::string random_match(std::mt19937& rng, const Pattern& p);

// Short noisy string over digits, letters and a few symbols.
std::string random_string(std::mt19937& rng, std::size_t max_len = 12);

std::vector<std::string> phone_corpus(std::uint32_t seed = 7);  // 10,000 rows
std::vector<std::string> medical_rows();
std::vector<std::string> medical_expected();
std::vector<std::string> name_rows();
std::vector<std::string> name_expected();
std::vector<std::string> date_rows();

std::string join_lines(const std::vector<std::string>& rows);

}  // namespace clx::testing
