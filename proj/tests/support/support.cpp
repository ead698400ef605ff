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

#include "support.hpp"

#include <algorithm>
#include <functional>
#include <regex>

#include "clx/dataio.hpp"

#ifndef CLX_TEST_DATA
#define CLX_TEST_DATA "tests/data"
#endif

namespace clx::testing {

std::string to_ecma(const std::string& nl_regex) {
  std::string s = nl_regex;
  if (s.size() >= 2 && s.front() == '/' && s.back() == '/') s = s.substr(1, s.size() - 2);
  static const std::pair<const char*, const char*> kClasses[] = {
      {"{digit}", "[0-9]"},   {"{lower}", "[a-z]"},         {"{upper}", "[A-Z]"},
      {"{alpha}", "[a-zA-Z]"}, {"{alnum}", "[a-zA-Z0-9_-]"}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out += s.substr(i, 2);
      i += 2;
      continue;
    }
    bool replaced = false;
    for (const auto& [from, to] : kClasses) {
      const std::string f = from;
      if (s.compare(i, f.size(), f) == 0) {
        out += to;
        i += f.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += s[i++];
  }
  return out;
}

std::string reference_replace(const ReplaceOperation& op, const std::string& input) {
  const std::regex re(to_ecma(op.match_regex), std::regex::ECMAScript);
  return std::regex_replace(input, re, op.replacement);
}

namespace {

// Can source token s, copied verbatim, stand for target token t?
bool produces(const Token& s, const Token& t) {
  if (t.is_literal()) return s.is_literal() && s.cls.literal == t.cls.literal;
  if (s.is_literal()) {
    // A constant counts as the run of same-class characters it was made from.
    const auto& lit = s.cls.literal;
    if (lit.empty()) return false;
    for (char c : lit) {
      const bool same = t.kind() == TokenKind::Digit   ? c >= '0' && c <= '9'
                        : t.kind() == TokenKind::Lower ? c >= 'a' && c <= 'z'
                        : t.kind() == TokenKind::Upper ? c >= 'A' && c <= 'Z'
                                                       : false;
      if (!same) return false;
    }
    return t.quantifier.is_plus() || lit.size() == t.quantifier.count();
  }
  if (s.kind() != t.kind()) return false;
  if (t.quantifier.is_plus()) return true;
  if (s.quantifier.is_plus()) return false;
  return s.quantifier.count() == t.quantifier.count();
}

}  // namespace

std::vector<TransformationPlan> brute_force_plans(const Pattern& source, const Pattern& target) {
  std::vector<TransformationPlan> out;
  std::vector<StringExpression> cur;
  const std::size_t n = source.size();
  const std::size_t m = target.size();
  std::function<void(std::size_t)> go = [&](std::size_t t) {
    if (t == m) {
      out.emplace_back(cur);
      return;
    }
    if (target[t].is_literal()) {
      cur.emplace_back(ConstStr{target[t].cls.literal});
      go(t + 1);
      cur.pop_back();
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = i; j <= n && t + (j - i) < m; ++j) {
        if (!produces(source[j - 1], target[t + (j - i)])) break;
        cur.emplace_back(Extract{i, j});
        go(t + (j - i) + 1);
        cur.pop_back();
      }
    }
  };
  go(0);
  return out;
}

namespace {

std::string class_chars(TokenKind k) {
  std::string out;
  for (int c = 32; c < 127; ++c)
    if (char_in_class(k, static_cast<char>(c))) out += static_cast<char>(c);
  return out;
}

std::string token_chars(const Token& t) {
  return t.is_literal() ? t.cls.literal : class_chars(t.kind());
}

bool disjoint(const Token& a, const Token& b) {
  const auto ca = token_chars(a);
  const auto cb = token_chars(b);
  // Literals next to literals are fine; they never merge.
  if (a.is_literal() && b.is_literal()) return true;
  for (char c : ca)
    if (cb.find(c) != std::string::npos) return false;
  return true;
}

}  // namespace

Pattern random_pattern(std::mt19937& rng, const PatternGen& gen) {
  std::uniform_int_distribution<std::size_t> len(gen.min_tokens, gen.max_tokens);
  const std::size_t n = len(rng);
  std::vector<TokenKind> kinds = {TokenKind::Digit, TokenKind::Lower, TokenKind::Upper};
  if (gen.wide_classes) {
    kinds.push_back(TokenKind::Alpha);
    kinds.push_back(TokenKind::AlphaNumeric);
  }
  static const char* kConstants[] = {"586", "CPT", "ab", "734"};
  Pattern p;
  while (p.size() < n) {
    Token t;
    const int roll = static_cast<int>(rng() % 10);
    if (roll < 3) {
      t = Token::literal(std::string(1, gen.symbols[rng() % gen.symbols.size()]));
    } else if (roll == 3 && gen.alnum_constants) {
      t = Token::literal(kConstants[rng() % 4]);
    } else {
      const TokenKind k = kinds[rng() % kinds.size()];
      const int q = static_cast<int>(rng() % 4);
      t = q == 0 ? Token::base(k, Quantifier::plus()) : Token::base(k, static_cast<std::uint32_t>(q));
    }
    if (!p.empty() && !disjoint(p.tokens.back(), t)) continue;
    p.tokens.push_back(std::move(t));
  }
  return p;
}

std::string random_match(std::mt19937& rng, const Pattern& p) {
  std::string out;
  for (const auto& t : p.tokens) {
    if (t.is_literal()) {
      out += t.cls.literal;
      continue;
    }
    const auto chars = class_chars(t.kind());
    const std::size_t n = t.quantifier.is_plus() ? 1 + rng() % 4 : t.quantifier.count();
    for (std::size_t i = 0; i < n; ++i) out += chars[rng() % chars.size()];
  }
  return out;
}

std::string random_string(std::mt19937& rng, std::size_t max_len) {
  static const std::string kAlphabet = "0123456789abcxyzABCXYZ--__..//  @:,(";
  const std::size_t n = 1 + rng() % max_len;
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += kAlphabet[rng() % kAlphabet.size()];
  return out;
}

std::vector<std::string> phone_corpus(std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto digits = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += static_cast<char>('0' + rng() % 10);
    return s;
  };
  // Formats in listing order, with counts decreasing in that order.
  const std::pair<int, int> plan[] = {{0, 4000}, {1, 3000}, {2, 2000}, {3, 1000}};
  std::vector<std::string> rows;
  for (const auto& [format, count] : plan) {
    for (int i = 0; i < count; ++i) {
      const auto a = digits(3), b = digits(3), c = digits(4);
      switch (format) {
        case 0: rows.push_back("(" + a + ")" + b + "-" + c); break;
        case 1: rows.push_back(a + "-" + b + "-" + c); break;
        case 2: rows.push_back("(" + a + ") " + b + "-" + c); break;
        default: rows.push_back(a + "." + b + "." + c); break;
      }
    }
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  return rows;
}

namespace {
std::vector<std::string> data_lines(const std::string& name) {
  return read_lines(read_file(std::string(CLX_TEST_DATA) + "/" + name));
}
}  // namespace

std::vector<std::string> medical_rows() { return data_lines("medical.txt"); }
std::vector<std::string> medical_expected() { return data_lines("medical_expected.txt"); }
std::vector<std::string> name_rows() { return data_lines("names.txt"); }
std::vector<std::string> name_expected() { return data_lines("names_expected.txt"); }
std::vector<std::string> date_rows() { return data_lines("dates.txt"); }

std::string join_lines(const std::vector<std::string>& rows) {
  std::string out;
  for (const auto& r : rows) out += r + "\n";
  return out;
}

}  // namespace clx::testing
