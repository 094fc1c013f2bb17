#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ebt/integer.hpp"
#include "ebt/matrix.hpp"
#include "ebt/smith.hpp"

namespace ebt {

/// A character of G, as coordinates in the invariant-factor decomposition
/// of the (abstractly isomorphic) character group A.
struct Character {
  std::vector<std::int64_t> coords;

  friend auto operator<=>(const Character&, const Character&) = default;
  friend bool operator==(const Character&, const Character&) = default;
};

/// A finite abelian group Z/d1 x ... x Z/dk with d1 | d2 | ... | dk, di >= 2.
class AbelianGroup {
 public:
  AbelianGroup() = default;

  /// Accepts any list of cyclic orders and normalizes it to invariant factors.
  explicit AbelianGroup(const std::vector<std::int64_t>& cyclic_orders) {
    for (auto d : cyclic_orders) {
      if (d < 1) throw Error("cyclic order must be positive, got " + std::to_string(d));
    }
    IntMatrix diag(cyclic_orders.size(), cyclic_orders.size());
    for (std::size_t i = 0; i < cyclic_orders.size(); ++i) diag(i, i) = Integer(static_cast<long>(cyclic_orders[i]));
    const auto structure = cokernel_structure(diag);
    for (const auto& t : structure.torsion) factors_.push_back(to_int64(t));
  }

  static AbelianGroup cyclic(std::int64_t n) { return AbelianGroup({n}); }

  const std::vector<std::int64_t>& invariant_factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  bool is_trivial() const { return factors_.empty(); }
  bool is_cyclic() const { return factors_.size() <= 1; }

  std::int64_t order() const {
    return std::accumulate(factors_.begin(), factors_.end(), std::int64_t{1}, std::multiplies<>());
  }
  std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }

  Character zero() const { return Character{std::vector<std::int64_t>(factors_.size(), 0)}; }

  Character reduce(Character c) const {
    check_arity(c);
    for (std::size_t i = 0; i < factors_.size(); ++i) c.coords[i] = mod_floor(c.coords[i], factors_[i]);
    return c;
  }
  Character add(const Character& a, const Character& b) const {
    check_arity(a);
    check_arity(b);
    Character c = a;
    for (std::size_t i = 0; i < factors_.size(); ++i) c.coords[i] = mod_floor(a.coords[i] + b.coords[i], factors_[i]);
    return c;
  }
  Character negate(const Character& a) const {
    check_arity(a);
    Character c = a;
    for (std::size_t i = 0; i < factors_.size(); ++i) c.coords[i] = mod_floor(-a.coords[i], factors_[i]);
    return c;
  }
  Character subtract(const Character& a, const Character& b) const { return add(a, negate(b)); }
  Character scale(const Character& a, std::int64_t k) const {
    check_arity(a);
    Character c = a;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      c.coords[i] = mod_floor(mod_floor(a.coords[i], factors_[i]) * mod_floor(k, factors_[i]), factors_[i]);
    }
    return c;
  }
  bool is_zero(const Character& a) const {
    return std::all_of(a.coords.begin(), a.coords.end(), [](std::int64_t x) { return x == 0; });
  }

  /// Canonical spec string, e.g. "Z/2 x Z/4"; the trivial group prints as "Z/1".
  std::string to_string() const {
    if (factors_.empty()) return "Z/1";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += " x ";
      s += "Z/" + std::to_string(factors_[i]);
    }
    return s;
  }

  std::string character_to_string(const Character& c) const {
    if (factors_.size() == 1) return std::to_string(c.coords[0]);
    if (factors_.empty()) return "0";
    std::string s = "(";
    for (std::size_t i = 0; i < c.coords.size(); ++i) s += (i ? "," : "") + std::to_string(c.coords[i]);
    return s + ")";
  }

  void check_arity(const Character& c) const {
    if (c.coords.size() != factors_.size()) throw Error("character has wrong number of coordinates");
  }

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  std::vector<std::int64_t> factors_;
};

/// All |G| characters in lexicographic order.
inline std::vector<Character> enumerate_characters(const AbelianGroup& g) {
  std::vector<Character> out;
  Character c = g.zero();
  const auto& d = g.invariant_factors();
  for (;;) {
    out.push_back(c);
    std::size_t i = d.size();
    while (i > 0) {
      --i;
      if (++c.coords[i] < d[i]) break;
      c.coords[i] = 0;
      if (i == 0) return out;
    }
    if (d.empty()) return out;
  }
}

/// Whether the characters generate all of A.
inline bool is_faithful(const AbelianGroup& g, const std::vector<Character>& entries) {
  const auto& d = g.invariant_factors();
  const std::size_t k = d.size();
  if (k == 0) return true;
  if (k == 1) {
    std::int64_t acc = d[0];
    for (const auto& e : entries) acc = std::gcd(acc, e.coords[0]);
    return acc == 1;
  }
  // Cokernel of [entries | diag(d)] must vanish.
  IntMatrix m(k, entries.size() + k);
  for (std::size_t j = 0; j < entries.size(); ++j)
    for (std::size_t i = 0; i < k; ++i) m(i, j) = Integer(static_cast<long>(entries[j].coords[i]));
  for (std::size_t i = 0; i < k; ++i) m(i, entries.size() + i) = Integer(static_cast<long>(d[i]));
  const auto c = cokernel_structure(m);
  return c.rank == 0 && c.torsion.empty();
}

/// Unordered n-tuple of characters, stored sorted.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::vector<Character> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
  }

  const std::vector<Character>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Character& operator[](std::size_t i) const { return entries_[i]; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
  friend bool operator==(const Symbol&, const Symbol&) = default;

 private:
  std::vector<Character> entries_;
};

/// Builds a canonical symbol from raw entries, reducing each modulo G.
inline Symbol make_symbol(const AbelianGroup& g, std::vector<Character> entries) {
  for (auto& e : entries) e = g.reduce(std::move(e));
  return Symbol(std::move(entries));
}

inline Symbol make_cyclic_symbol(const AbelianGroup& g, const std::vector<std::int64_t>& values) {
  if (g.num_factors() != 1) throw Error("integer symbol entries require a cyclic group");
  std::vector<Character> entries;
  for (auto v : values) entries.push_back(Character{{v}});
  return make_symbol(g, std::move(entries));
}

inline std::string symbol_to_string(const AbelianGroup& g, const Symbol& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + g.character_to_string(s[i]);
  return out + "]";
}

/// All faithful size-n multisets of characters, in lexicographic order.
inline std::vector<Symbol> enumerate_symbols(const AbelianGroup& g, std::size_t n) {
  if (n == 0) throw Error("symbol length must be at least 1");
  const auto chars = enumerate_characters(g);
  std::vector<Symbol> out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<Character> entries;
    entries.reserve(n);
    for (auto i : idx) entries.push_back(chars[i]);
    if (is_faithful(g, entries)) out.emplace_back(std::move(entries));
    // next non-decreasing index tuple
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == chars.size() - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < n; ++j) idx[j] = idx[pos - 1];
  }
  return out;
}

/// Negates entry i and re-canonicalizes.
inline Symbol negate_entry(const AbelianGroup& g, const Symbol& s, std::size_t i) {
  if (i >= s.size()) throw Error("entry index out of range");
  std::vector<Character> entries = s.entries();
  entries[i] = g.negate(entries[i]);
  return Symbol(std::move(entries));
}

}  // namespace ebt
