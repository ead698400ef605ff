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

#include "clx/pattern.hpp"

#include <limits>

namespace clx {

Quantifier Quantifier::exactly(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("quantifier must be >= 1");
  return Quantifier(n);
}

PatternSyntaxError::PatternSyntaxError(const std::string& what,
                                       std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      position_(position) {}

bool is_base_kind(TokenKind k) { return k != TokenKind::Literal; }

bool char_in_class(TokenKind k, char c) {
  const bool digit = c >= '0' && c <= '9';
  const bool lower = c >= 'a' && c <= 'z';
  const bool upper = c >= 'A' && c <= 'Z';
  switch (k) {
    case TokenKind::Digit:
      return digit;
    case TokenKind::Lower:
      return lower;
    case TokenKind::Upper:
      return upper;
    case TokenKind::Alpha:
      return lower || upper;
    case TokenKind::AlphaNumeric:
      return digit || lower || upper || c == '_' || c == '-';
    case TokenKind::Literal:
      return false;
  }
  return false;
}

std::string_view kind_tag(TokenKind k) {
  switch (k) {
    case TokenKind::Digit:
      return "D";
    case TokenKind::Lower:
      return "L";
    case TokenKind::Upper:
      return "U";
    case TokenKind::Alpha:
      return "A";
    case TokenKind::AlphaNumeric:
      return "AN";
    case TokenKind::Literal:
      break;
  }
  return "";
}

std::string_view kind_regex_name(TokenKind k) {
  switch (k) {
    case TokenKind::Digit:
      return "digit";
    case TokenKind::Lower:
      return "lower";
    case TokenKind::Upper:
      return "upper";
    case TokenKind::Alpha:
      return "alpha";
    case TokenKind::AlphaNumeric:
      return "alnum";
    case TokenKind::Literal:
      break;
  }
  return "";
}

std::size_t token_frequency(TokenKind kind, const Pattern& p) {
  std::size_t total = 0;
  for (const auto& t : p.tokens)
    if (t.kind() == kind) total += t.quantifier.weight();
  return total;
}

bool literal_fits(TokenKind k, std::string_view text) {
  if (text.empty() || !is_base_kind(k)) return false;
  for (char c : text)
    if (!char_in_class(k, c)) return false;
  return true;
}

std::uint32_t covered_width(const Token& t) {
  if (t.is_literal()) return static_cast<std::uint32_t>(t.cls.literal.size());
  return t.quantifier.count();
}

bool class_generalizes(const TokenClass& parent, const TokenClass& child) {
  if (parent == child) return true;
  if (child.is_literal()) return literal_fits(parent.kind, child.literal);
  switch (parent.kind) {
    case TokenKind::Alpha:
      return child.kind == TokenKind::Lower || child.kind == TokenKind::Upper;
    case TokenKind::AlphaNumeric:
      return true;
    default:
      return false;
  }
}

bool covers(const Pattern& parent, const Pattern& child) {
  const std::size_t np = parent.size();
  const std::size_t nc = child.size();
  if (np == 0 || nc == 0) return np == nc;
  if (nc < np) return false;

  // reach[i][j]: parent[0..i) covers child[0..j).
  std::vector<std::vector<char>> reach(np + 1, std::vector<char>(nc + 1, 0));
  reach[0][0] = 1;
  for (std::size_t i = 1; i <= np; ++i) {
    const Token& pt = parent[i - 1];
    if (pt.is_literal()) {
      for (std::size_t j = i; j <= nc; ++j)
        reach[i][j] = reach[i - 1][j - 1] && child[j - 1].cls == pt.cls;
      continue;
    }
    for (std::size_t j = i; j <= nc; ++j) {
      std::uint64_t sum = 0;
      bool any_plus = false;
      for (std::size_t k = j; k-- > i - 1;) {
        const Token& ct = child[k];
        if (!class_generalizes(pt.cls, ct.cls)) break;
        if (!ct.is_literal() && ct.quantifier.is_plus())
          any_plus = true;
        else
          sum += covered_width(ct);
        const bool quant_ok =
            pt.quantifier.is_plus() ||
            (!any_plus && sum == pt.quantifier.count());
        if (quant_ok && reach[i - 1][k]) {
          reach[i][j] = 1;
          break;
        }
        if (!pt.quantifier.is_plus() && (any_plus || sum > pt.quantifier.count()))
          break;
      }
    }
  }
  return reach[np][nc] != 0;
}

namespace {

bool is_alnum_char(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
  Pattern p;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '<') {
      const auto close = text.find('>', i);
      if (close == std::string_view::npos)
        throw PatternSyntaxError("unterminated class tag", i);
      const auto tag = text.substr(i + 1, close - i - 1);
      TokenKind kind;
      if (tag == "D")
        kind = TokenKind::Digit;
      else if (tag == "L")
        kind = TokenKind::Lower;
      else if (tag == "U")
        kind = TokenKind::Upper;
      else if (tag == "A")
        kind = TokenKind::Alpha;
      else if (tag == "AN")
        kind = TokenKind::AlphaNumeric;
      else
        throw PatternSyntaxError("unknown token class <" + std::string(tag) + ">", i);
      i = close + 1;
      Quantifier q;
      if (i < text.size() && text[i] == '+') {
        q = Quantifier::plus();
        ++i;
      } else if (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        const std::size_t start = i;
        std::uint64_t n = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          n = n * 10 + static_cast<std::uint64_t>(text[i] - '0');
          if (n > std::numeric_limits<std::uint32_t>::max())
            throw PatternSyntaxError("quantifier too large", start);
          ++i;
        }
        if (n == 0) throw PatternSyntaxError("quantifier must be >= 1", start);
        if (text[start] == '0')
          throw PatternSyntaxError("quantifier has a leading zero", start);
        q = Quantifier::exactly(static_cast<std::uint32_t>(n));
      }
      p.tokens.push_back(Token{TokenClass::base(kind), q});
    } else if (c == '\'') {
      const std::size_t start = i++;
      std::string lit;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\\') {
          if (i + 1 >= text.size())
            throw PatternSyntaxError("dangling escape in literal", i);
          lit.push_back(text[i + 1]);
          i += 2;
        } else if (text[i] == '\'') {
          closed = true;
          ++i;
          break;
        } else {
          lit.push_back(text[i++]);
        }
      }
      if (!closed) throw PatternSyntaxError("unterminated literal", start);
      if (lit.empty()) throw PatternSyntaxError("empty literal", start);
      p.tokens.push_back(Token::literal(std::move(lit)));
    } else {
      throw PatternSyntaxError(std::string("unexpected character '") + c + "'", i);
    }
  }
  if (p.empty()) throw PatternSyntaxError("empty pattern", 0);
  return p;
}

std::string render_pattern(const Pattern& p) {
  std::string out;
  for (const auto& t : p.tokens) {
    if (t.is_literal()) {
      out += '\'';
      for (char c : t.cls.literal) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
      }
      out += '\'';
      continue;
    }
    out += '<';
    out += kind_tag(t.kind());
    out += '>';
    if (t.quantifier.is_plus())
      out += '+';
    else if (t.quantifier.count() != 1)
      out += std::to_string(t.quantifier.count());
  }
  return out;
}

std::string render_regex(const Pattern& p,
                         std::span<const TokenRange> capture_spans) {
  for (std::size_t s = 0; s < capture_spans.size(); ++s) {
    const auto& r = capture_spans[s];
    if (r.first > r.last || r.last >= p.size())
      throw std::invalid_argument("capture span out of bounds");
    if (s > 0 && capture_spans[s - 1].last >= r.first)
      throw std::invalid_argument("capture spans overlap or are unordered");
  }

  std::string out = "/^";
  std::size_t next_span = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool opens = next_span < capture_spans.size() &&
                       capture_spans[next_span].first == i;
    if (opens) out += '(';
    const Token& t = p[i];
    if (t.is_literal()) {
      for (char c : t.cls.literal) {
        if (!is_alnum_char(c)) out += '\\';
        out += c;
      }
    } else {
      out += '{';
      out += kind_regex_name(t.kind());
      out += '}';
      if (t.quantifier.is_plus())
        out += '+';
      else
        out += '{' + std::to_string(t.quantifier.count()) + '}';
    }
    if (next_span < capture_spans.size() && capture_spans[next_span].last == i) {
      out += ')';
      ++next_span;
    }
  }
  out += "$/";
  return out;
}

namespace {

class Matcher {
 public:
  Matcher(const Pattern& p, std::string_view s)
      : p_(p), s_(s), failed_((p.size() + 1) * (s.size() + 1), 0),
        spans_(p.size()) {}

  bool run() { return step(0, 0); }
  std::vector<CharSpan> spans() && { return std::move(spans_); }

 private:
  bool step(std::size_t ti, std::size_t pos) {
    if (ti == p_.size()) return pos == s_.size();
    char& failed = failed_[ti * (s_.size() + 1) + pos];
    if (failed) return false;

    const Token& t = p_[ti];
    if (t.is_literal()) {
      const auto& lit = t.cls.literal;
      if (s_.substr(pos, lit.size()) == lit && try_span(ti, pos, pos + lit.size()))
        return true;
    } else {
      std::size_t run = 0;
      while (pos + run < s_.size() && char_in_class(t.kind(), s_[pos + run])) ++run;
      if (t.quantifier.is_plus()) {
        // Greedy: longest first, then back off.
        for (std::size_t len = run; len >= 1; --len)
          if (try_span(ti, pos, pos + len)) return true;
      } else if (run >= t.quantifier.count() &&
                 try_span(ti, pos, pos + t.quantifier.count())) {
        return true;
      }
    }
    failed = 1;
    return false;
  }

  bool try_span(std::size_t ti, std::size_t begin, std::size_t end) {
    if (!step(ti + 1, end)) return false;
    spans_[ti] = CharSpan{begin, end};
    return true;
  }

  const Pattern& p_;
  std::string_view s_;
  std::vector<char> failed_;
  std::vector<CharSpan> spans_;
};

}  // namespace

std::optional<std::vector<CharSpan>> match_spans(const Pattern& p,
                                                 std::string_view s) {
  if (p.empty()) return s.empty() ? std::optional<std::vector<CharSpan>>(std::vector<CharSpan>{})
                                  : std::nullopt;
  Matcher m(p, s);
  if (!m.run()) return std::nullopt;
  return std::move(m).spans();
}

}  // namespace clx
