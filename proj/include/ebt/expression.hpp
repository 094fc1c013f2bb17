#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ebt/characters.hpp"
#include "ebt/integer.hpp"

namespace ebt {

/// Formal integer combination of symbols; duplicates merged, zeros dropped.
class SymbolExpression {
 public:
  SymbolExpression() = default;
  SymbolExpression(const Symbol& s, const Integer& coefficient = 1) { add(s, coefficient); }

  void add(const Symbol& s, const Integer& coefficient = 1) {
    if (sgn(coefficient) == 0) return;
    auto [it, inserted] = terms_.try_emplace(s, coefficient);
    if (!inserted) {
      it->second += coefficient;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  SymbolExpression& operator+=(const SymbolExpression& other) {
    for (const auto& [s, c] : other.terms_) add(s, c);
    return *this;
  }
  SymbolExpression& operator-=(const SymbolExpression& other) {
    for (const auto& [s, c] : other.terms_) add(s, -c);
    return *this;
  }
  friend SymbolExpression operator+(SymbolExpression a, const SymbolExpression& b) { return a += b; }
  friend SymbolExpression operator-(SymbolExpression a, const SymbolExpression& b) { return a -= b; }

  SymbolExpression scaled(const Integer& k) const {
    SymbolExpression out;
    for (const auto& [s, c] : terms_) out.add(s, c * k);
    return out;
  }

  bool empty() const { return terms_.empty(); }
  const std::map<Symbol, Integer>& terms() const { return terms_; }

  friend bool operator==(const SymbolExpression&, const SymbolExpression&) = default;

 private:
  std::map<Symbol, Integer> terms_;
};

/// Canonical text form, e.g. "[1,0] + 2*[4,0] - [1,1]"; the empty expression is "0".
inline std::string expression_to_string(const AbelianGroup& g, const SymbolExpression& e) {
  if (e.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : e.terms()) {
    const bool negative = sgn(c) < 0;
    const Integer mag = abs(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += symbol_to_string(g, s);
    first = false;
  }
  return out;
}

}  // namespace ebt
