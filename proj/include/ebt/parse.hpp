#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ebt/characters.hpp"
#include "ebt/expression.hpp"
#include "ebt/integer.hpp"

namespace ebt {

/// Syntax error; `position` is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::int64_t integer(bool allow_sign = true) {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (allow_sign && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      pos_ = start;
      fail("expected integer");
    }
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > (INT64_MAX - 9) / 10) fail("integer too large");
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return negative ? -v : v;
  }
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }
  std::size_t position() const { return pos_; }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

inline Character parse_character(Cursor& cur, const AbelianGroup& g) {
  const std::size_t k = g.num_factors();
  Character c;
  if (cur.peek() == '(') {
    cur.expect('(');
    if (cur.peek() != ')') {
      c.coords.push_back(cur.integer());
      while (cur.accept(',')) c.coords.push_back(cur.integer());
    }
    cur.expect(')');
    if (c.coords.size() != k && !(k == 0 && c.coords.size() == 1 && c.coords[0] == 0)) {
      cur.fail("character tuple has " + std::to_string(c.coords.size()) + " coordinates, group needs " +
               std::to_string(k));
    }
  } else {
    const std::int64_t v = cur.integer();
    if (k == 1) {
      c.coords.push_back(v);
    } else if (k == 0 && v == 0) {
      // trivial group: the only character
    } else {
      cur.fail("integer character entries require a cyclic group; use a tuple");
    }
  }
  if (k == 0) c.coords.clear();
  return g.reduce(std::move(c));
}

}  // namespace detail

/// Parses `Z/<d>` terms joined by `x`, ignoring whitespace, e.g. "Z/4 x Z/2".
inline AbelianGroup parse_group_spec(const std::string& text) {
  detail::Cursor cur(text);
  std::vector<std::int64_t> orders;
  do {
    if (!cur.accept('Z')) cur.fail("expected 'Z'");
    cur.expect('/');
    const std::size_t at = cur.position();
    const std::int64_t d = cur.integer(false);
    if (d < 1) throw ParseError("cyclic order must be positive", at);
    orders.push_back(d);
  } while (cur.accept('x'));
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return AbelianGroup(orders);
}

/// Parses `k*[a1,...,an]` terms joined by `+`/`-`; "0" is the empty sum.
/// Entries are integers for cyclic groups or parenthesized tuples.
inline SymbolExpression parse_expression(const std::string& text, const AbelianGroup& g) {
  detail::Cursor cur(text);
  SymbolExpression out;
  if (cur.at_end()) cur.fail("empty expression");
  bool first = true;
  while (!cur.at_end()) {
    Integer sign = 1;
    if (!first) {
      if (cur.accept('+')) {
        sign = 1;
      } else if (cur.accept('-')) {
        sign = -1;
      } else {
        cur.fail("expected '+' or '-'");
      }
    } else if (cur.accept('-')) {
      sign = -1;
    } else {
      cur.accept('+');
    }
    first = false;
    Integer coefficient = 1;
    if (cur.peek() != '[') {
      coefficient = Integer(static_cast<long>(cur.integer(false)));
      if (!cur.accept('*')) {
        // a bare integer term is only meaningful as zero
        if (coefficient != 0) cur.fail("expected '*' after coefficient");
        continue;
      }
    }
    cur.expect('[');
    std::vector<Character> entries;
    entries.push_back(detail::parse_character(cur, g));
    while (cur.accept(',')) entries.push_back(detail::parse_character(cur, g));
    cur.expect(']');
    out.add(Symbol(std::move(entries)), sign * coefficient);
  }
  return out;
}

}  // namespace ebt
