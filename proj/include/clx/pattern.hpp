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
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clx {

// Token classes. The five base classes are fixed character sets; Literal
// carries a constant string (a single symbol at tokenization level, or a
// multi-character constant found by the profiler).
enum class TokenKind : std::uint8_t {
  Digit,         // [0-9]
  Lower,         // [a-z]
  Upper,         // [A-Z]
  Alpha,         // [a-zA-Z]
  AlphaNumeric,  // [a-zA-Z0-9_-]
  Literal,
};

inline constexpr TokenKind kBaseKinds[] = {TokenKind::Digit, TokenKind::Lower,
                                           TokenKind::Upper, TokenKind::Alpha,
                                           TokenKind::AlphaNumeric};

struct TokenClass {
  TokenKind kind = TokenKind::Digit;
  std::string literal;  // only meaningful for TokenKind::Literal

  static TokenClass base(TokenKind k) { return TokenClass{k, {}}; }
  static TokenClass constant(std::string text) {
    return TokenClass{TokenKind::Literal, std::move(text)};
  }

  bool is_literal() const { return kind == TokenKind::Literal; }

  friend bool operator==(const TokenClass&, const TokenClass&) = default;
  friend auto operator<=>(const TokenClass&, const TokenClass&) = default;
};

// Either a natural number >= 1 or Plus ("at least once").
class Quantifier {
 public:
  constexpr Quantifier() = default;

  static constexpr Quantifier plus() { return Quantifier(0); }
  // Throws std::invalid_argument when n == 0.
  static Quantifier exactly(std::uint32_t n);

  constexpr bool is_plus() const { return count_ == 0; }
  // Precondition: !is_plus().
  constexpr std::uint32_t count() const { return count_; }
  // Token frequency weight: Plus counts as 1.
  constexpr std::uint32_t weight() const { return is_plus() ? 1 : count_; }

  friend constexpr bool operator==(Quantifier, Quantifier) = default;
  friend constexpr auto operator<=>(Quantifier, Quantifier) = default;

 private:
  explicit constexpr Quantifier(std::uint32_t n) : count_(n) {}
  std::uint32_t count_ = 1;
};

struct Token {
  TokenClass cls;
  Quantifier quantifier;

  static Token base(TokenKind k, Quantifier q = Quantifier{}) {
    return Token{TokenClass::base(k), q};
  }
  static Token base(TokenKind k, std::uint32_t n) {
    return Token{TokenClass::base(k), Quantifier::exactly(n)};
  }
  static Token literal(std::string text) {
    return Token{TokenClass::constant(std::move(text)), Quantifier{}};
  }

  TokenKind kind() const { return cls.kind; }
  bool is_literal() const { return cls.is_literal(); }

  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
};

struct Pattern {
  std::vector<Token> tokens;

  Pattern() = default;
  Pattern(std::initializer_list<Token> init) : tokens(init) {}
  explicit Pattern(std::vector<Token> t) : tokens(std::move(t)) {}

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

// Zero-based, inclusive range of token positions.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// Half-open character span [begin, end) into a matched string.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - begin; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

class PatternSyntaxError : public std::runtime_error {
 public:
  PatternSyntaxError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

bool is_base_kind(TokenKind k);
bool char_in_class(TokenKind k, char c);
std::string_view kind_tag(TokenKind k);         // "D", "L", "U", "A", "AN"
std::string_view kind_regex_name(TokenKind k);  // "digit", "lower", ...

// Sum of quantifiers of tokens of class `kind` in `p`, Plus counted as 1.
std::size_t token_frequency(TokenKind kind, const Pattern& p);

// True iff `text` is non-empty and every character is in base class `k`.
bool literal_fits(TokenKind k, std::string_view text);

// Partial order on token classes: true iff every string of `child` is a
// string of `parent` (Lower <= Alpha <= AlphaNumeric, '-' <= AlphaNumeric,
// ...). A literal generalizes to itself and to any base class holding all
// of its characters ('-' and '_' to AlphaNumeric, "586" to Digit).
bool class_generalizes(const TokenClass& parent, const TokenClass& child);

// Characters a token stands for when it is covered by a natural parent
// quantifier: the literal's length, or the natural quantifier.
std::uint32_t covered_width(const Token& t);

// Structural coverage: `child` splits into |parent| consecutive non-empty
// groups, each generalizing to the matching parent token, with natural
// parent quantifiers equal to the group's summed widths.
bool covers(const Pattern& parent, const Pattern& child);

// Textual pattern syntax, e.g. "<U><L>2<D>3'@'<L>5'.'<L>3".
Pattern parse_pattern(std::string_view text);
std::string render_pattern(const Pattern& p);

// Natural-language-like regular expression, e.g. "/^({digit}{3})\-...$/".
// Capture spans must be disjoint, ordered, and in bounds.
std::string render_regex(const Pattern& p,
                         std::span<const TokenRange> capture_spans = {});

// Anchored, character-level match of `s` against `p` with the same
// leftmost-greedy backtracking a regex engine uses for the rendered regex.
// Returns one span per pattern token on success.
std::optional<std::vector<CharSpan>> match_spans(const Pattern& p,
                                                 std::string_view s);
inline bool matches(const Pattern& p, std::string_view s) {
  return match_spans(p, s).has_value();
}

}  // namespace clx
