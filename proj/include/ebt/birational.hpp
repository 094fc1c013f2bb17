#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ebt/characters.hpp"
#include "ebt/expression.hpp"
#include "ebt/matrix.hpp"
#include "ebt/presented_group.hpp"
#include "ebt/smith.hpp"

namespace ebt {

/// Which quotient of the free group on symbols: blow-up (B), modular
/// blow-up (M), or their antisymmetric versions.
enum class Variant { B, M, Bminus, Mminus };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::B: return "B";
    case Variant::M: return "M";
    case Variant::Bminus: return "B-";
    case Variant::Mminus: return "M-";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "B") return Variant::B;
  if (s == "M") return Variant::M;
  if (s == "B-" || s == "Bminus") return Variant::Bminus;
  if (s == "M-" || s == "Mminus") return Variant::Mminus;
  throw Error("unknown variant '" + s + "' (expected B, M, B- or M-)");
}

inline bool is_antisymmetric(Variant v) { return v == Variant::Bminus || v == Variant::Mminus; }
inline bool is_modular(Variant v) { return v == Variant::M || v == Variant::Mminus; }

namespace detail {

inline void check_variant(const AbelianGroup& g, Variant v) {
  if (is_antisymmetric(v) && g.is_trivial()) {
    throw Error("variant " + to_string(v) + " is defined only for nontrivial G");
  }
}

class ColumnBuilder {
 public:
  ColumnBuilder(const std::map<Symbol, std::size_t>& index, const AbelianGroup& g) : index_(index), g_(g) {}

  void add(const Symbol& s, long coefficient) {
    auto it = index_.find(s);
    if (it == index_.end()) {
      throw Error("relation involves non-faithful symbol " + symbol_to_string(g_, s));
    }
    acc_[it->second] += coefficient;
  }

  SparseColumn take() {
    SparseColumn col;
    for (const auto& [row, v] : acc_)
      if (v != 0) col.emplace_back(row, Integer(v));
    acc_.clear();
    return col;
  }

 private:
  const std::map<Symbol, std::size_t>& index_;
  const AbelianGroup& g_;
  std::map<std::size_t, long> acc_;
};

}  // namespace detail

/// Relation columns over the basis enumerate_symbols(g, n): blow-up
/// relations for every unordered pair of entry positions, plus the
/// antisymmetry relations for the minus variants. Zero and duplicate
/// columns are dropped; column order is first-emission order.
inline SparseMatrix build_relations(const AbelianGroup& g, std::size_t n, Variant variant,
                                    const std::vector<Symbol>& symbols) {
  detail::check_variant(g, variant);
  std::map<Symbol, std::size_t> index;
  for (std::size_t i = 0; i < symbols.size(); ++i) index.emplace(symbols[i], i);

  SparseMatrix m;
  m.rows = symbols.size();
  std::set<SparseColumn> seen;
  detail::ColumnBuilder builder(index, g);
  auto emit = [&](SparseColumn col) {
    if (col.empty() || !seen.insert(col).second) return;
    m.columns.push_back(std::move(col));
  };

  for (const Symbol& s : symbols) {
    const auto& e = s.entries();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Character& a = e[i];
        const Character& b = e[j];
        std::vector<Character> rest;
        for (std::size_t k = 0; k < n; ++k)
          if (k != i && k != j) rest.push_back(e[k]);
        auto with = [&](Character x, Character y) {
          std::vector<Character> v = rest;
          v.push_back(std::move(x));
          v.push_back(std::move(y));
          return Symbol(std::move(v));
        };
        builder.add(s, 1);
        if (!is_modular(variant) && a == b) {
          builder.add(with(g.zero(), a), -1);
        } else {
          builder.add(with(a, g.subtract(b, a)), -1);
          builder.add(with(g.subtract(a, b), b), -1);
        }
        emit(builder.take());
      }
    }
    if (is_antisymmetric(variant)) {
      for (std::size_t i = 0; i < n; ++i) {
        builder.add(s, 1);
        builder.add(negate_entry(g, s, i), 1);
        emit(builder.take());
      }
    }
  }
  return m;
}

inline SparseMatrix build_relations(const AbelianGroup& g, std::size_t n, Variant variant) {
  return build_relations(g, n, variant, enumerate_symbols(g, n));
}

/// One of B_n(G), M_n(G), B_n^-(G), M_n^-(G), presented on the symbol basis.
class BirationalGroup {
 public:
  BirationalGroup(const AbelianGroup& g, std::size_t n, Variant variant)
      : g_(g), n_(n), variant_(variant), symbols_(init_symbols(g, n, variant)) {
    index_symbols();
    group_ = std::make_shared<const PresentedAbelianGroup>(labels(), build_relations(g, n, variant, symbols_));
  }

  /// Adopts an already-presented group (e.g. loaded from a cache); the
  /// generator labels must match the symbol enumeration.
  BirationalGroup(const AbelianGroup& g, std::size_t n, Variant variant, GroupPtr presented)
      : g_(g), n_(n), variant_(variant), symbols_(init_symbols(g, n, variant)), group_(std::move(presented)) {
    index_symbols();
    if (group_->generator_labels() != labels()) throw Error("presented group does not match symbol basis");
  }

  const AbelianGroup& abelian_group() const { return g_; }
  std::size_t dimension() const { return n_; }
  Variant variant() const { return variant_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const GroupPtr& presented() const { return group_; }
  std::size_t num_generators() const { return symbols_.size(); }

  std::optional<std::size_t> index_of(const Symbol& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  IntVector coords_of(const SymbolExpression& expr) const {
    IntVector coords(symbols_.size(), Integer(0));
    for (const auto& [s, c] : expr.terms()) {
      if (s.size() != n_) {
        throw Error("symbol " + symbol_to_string(g_, s) + " has " + std::to_string(s.size()) + " entries, expected " +
                    std::to_string(n_));
      }
      auto idx = index_of(s);
      if (!idx) throw Error("symbol " + symbol_to_string(g_, s) + " is not faithful");
      coords[*idx] += c;
    }
    return coords;
  }

  GroupElementClass class_of(const SymbolExpression& expr) const {
    return GroupElementClass(group_, coords_of(expr));
  }

  GroupElementClass zero() const { return GroupElementClass::zero(group_); }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(symbols_.size());
    for (const auto& s : symbols_) out.push_back(symbol_to_string(g_, s));
    return out;
  }

 private:
  static std::vector<Symbol> init_symbols(const AbelianGroup& g, std::size_t n, Variant v) {
    detail::check_variant(g, v);
    return enumerate_symbols(g, n);
  }
  void index_symbols() {
    for (std::size_t i = 0; i < symbols_.size(); ++i) index_.emplace(symbols_[i], i);
  }

  AbelianGroup g_;
  std::size_t n_;
  Variant variant_;
  std::vector<Symbol> symbols_;
  std::map<Symbol, std::size_t> index_;
  GroupPtr group_;
};

using BirationalPtr = std::shared_ptr<const BirationalGroup>;

/// Produces presented groups on demand; lets callers plug in caching.
using GroupSource = std::function<BirationalPtr(const AbelianGroup&, std::size_t, Variant)>;

/// In-memory memo of presented groups. Each entry is built once, then shared
/// read-only.
class GroupCache {
 public:
  GroupCache() = default;
  explicit GroupCache(GroupSource fallback) : fallback_(std::move(fallback)) {}

  BirationalPtr get(const AbelianGroup& g, std::size_t n, Variant v) {
    const Key key{g.invariant_factors(), n, v};
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    BirationalPtr p = fallback_ ? fallback_(g, n, v) : std::make_shared<const BirationalGroup>(g, n, v);
    entries_.emplace(key, p);
    return p;
  }

  GroupSource source() {
    return [this](const AbelianGroup& g, std::size_t n, Variant v) { return get(g, n, v); };
  }

 private:
  using Key = std::tuple<std::vector<std::int64_t>, std::size_t, Variant>;
  GroupSource fallback_;
  std::mutex mutex_;
  std::map<Key, BirationalPtr> entries_;
};

inline BirationalPtr presented_group(const AbelianGroup& g, std::size_t n, Variant v) {
  return std::make_shared<const BirationalGroup>(g, n, v);
}

inline GroupElementClass class_of(const SymbolExpression& expr, const BirationalGroup& group) {
  return group.class_of(expr);
}

inline std::size_t count_zero_entries(const AbelianGroup& g, const Symbol& s) {
  std::size_t zeros = 0;
  for (const auto& e : s.entries())
    if (g.is_zero(e)) ++zeros;
  return zeros;
}

/// Coefficient of mu on a symbol: 1 with no zero entry, 2 with exactly one,
/// 0 otherwise.
inline long mu_coefficient(const AbelianGroup& g, const Symbol& s) {
  switch (count_zero_entries(g, s)) {
    case 0: return 1;
    case 1: return 2;
    default: return 0;
  }
}

/// The map B_n(G) -> M_n(G) on the shared symbol basis (diagonal). The same
/// matrix represents the antisymmetric version.
inline IntMatrix mu_matrix(const AbelianGroup& g, std::size_t n) {
  if (n < 2) throw Error("mu is defined for n >= 2");
  const auto symbols = enumerate_symbols(g, n);
  IntMatrix m(symbols.size(), symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) m(i, i) = mu_coefficient(g, symbols[i]);
  return m;
}

namespace detail {

inline bool mu_descends(const BirationalGroup& source, const BirationalGroup& target) {
  const IntMatrix mu = mu_matrix(source.abelian_group(), source.dimension());
  const auto& relations = source.presented()->relations();
  const auto& snf = target.presented()->smith();
  for (const auto& col : relations.columns) {
    IntVector image(mu.rows(), Integer(0));
    for (const auto& [row, v] : col) image[row] += mu(row, row) * v;
    if (!in_column_span(snf, image)) return false;
  }
  return true;
}

}  // namespace detail

/// Whether mu maps every B-relation into the span of the M-relations (and
/// likewise for the antisymmetric pair when G is nontrivial).
inline bool verify_mu_descends(const AbelianGroup& g, std::size_t n, const GroupSource& source) {
  if (n < 2) throw Error("mu is defined for n >= 2");
  if (!detail::mu_descends(*source(g, n, Variant::B), *source(g, n, Variant::M))) return false;
  if (g.is_trivial()) return true;
  return detail::mu_descends(*source(g, n, Variant::Bminus), *source(g, n, Variant::Mminus));
}

inline bool verify_mu_descends(const AbelianGroup& g, std::size_t n) {
  GroupCache cache;
  return verify_mu_descends(g, n, cache.source());
}

struct MuComparison {
  std::size_t rank_source = 0;
  std::size_t rank_target = 0;
  std::size_t mu_rank_over_q = 0;
  bool iso_over_q = false;
};

struct RankComparison {
  MuComparison mu;
  std::optional<MuComparison> mu_minus;  // absent for trivial G
};

/// Matrix of the map induced by mu on free parts, in SNF free coordinates.
inline IntMatrix induced_free_map(const BirationalGroup& source, const BirationalGroup& target) {
  const auto& src = source.presented()->smith();
  const auto& dst = target.presented()->smith();
  if (!src.has_u_inverse) throw Error("source presentation lacks U^{-1}");
  const std::size_t g = source.num_generators();
  const IntMatrix mu = mu_matrix(source.abelian_group(), source.dimension());
  IntMatrix lift = src.u_inverse.column_range(src.rank, g);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < lift.cols(); ++j) lift(i, j) *= mu(i, i);
  return (dst.U * lift).row_range(dst.rank, g);
}

inline MuComparison compare_over_q(const BirationalGroup& source, const BirationalGroup& target) {
  MuComparison c;
  c.rank_source = source.presented()->rank();
  c.rank_target = target.presented()->rank();
  c.mu_rank_over_q = rank_fraction_free(induced_free_map(source, target));
  c.iso_over_q = c.rank_source == c.rank_target && c.mu_rank_over_q == c.rank_source;
  return c;
}

inline RankComparison rank_compare(const AbelianGroup& g, std::size_t n, const GroupSource& source) {
  if (n < 2) throw Error("mu is defined for n >= 2");
  RankComparison r;
  r.mu = compare_over_q(*source(g, n, Variant::B), *source(g, n, Variant::M));
  if (!g.is_trivial()) r.mu_minus = compare_over_q(*source(g, n, Variant::Bminus), *source(g, n, Variant::Mminus));
  return r;
}

inline RankComparison rank_compare(const AbelianGroup& g, std::size_t n) {
  GroupCache cache;
  return rank_compare(g, n, cache.source());
}

/// [a,0,...,0] + [-a,0,...,0] for cyclic G.
inline SymbolExpression delta_expression(const AbelianGroup& g, std::size_t n, std::int64_t a) {
  if (g.num_factors() != 1) throw Error("delta is defined for cyclic G");
  if (n < 2) throw Error("delta needs n >= 2");
  std::vector<std::int64_t> plus(n, 0), minus(n, 0);
  plus[0] = a;
  minus[0] = -a;
  SymbolExpression e(make_cyclic_symbol(g, plus));
  e.add(make_cyclic_symbol(g, minus));
  return e;
}

inline GroupElementClass delta_class(const BirationalGroup& group, std::int64_t a = 1) {
  return group.class_of(delta_expression(group.abelian_group(), group.dimension(), a));
}

/// [0,0,g1,...,gk,0,...] where g1..gk generate G; n >= k + 2.
inline SymbolExpression zero_zero_one_expression(const AbelianGroup& g, std::size_t n) {
  const std::size_t k = g.num_factors();
  if (n < 3 || n < k + 2) throw Error("[0,0,1,...] needs n >= 3 and room for generators of G");
  std::vector<Character> entries(n, g.zero());
  for (std::size_t i = 0; i < k; ++i) entries[2 + i].coords[i] = 1;
  if (!is_faithful(g, entries)) throw Error("padded [0,0,1,...] symbol is not faithful");
  return SymbolExpression(make_symbol(g, std::move(entries)));
}

inline GroupElementClass zero_zero_one_class(const BirationalGroup& group) {
  return group.class_of(zero_zero_one_expression(group.abelian_group(), group.dimension()));
}

/// Sum of the symbols of the tangent characters at the fixed components.
inline GroupElementClass class_from_fixed_point_data(const std::vector<std::vector<Character>>& components,
                                                     const BirationalGroup& group) {
  const auto& g = group.abelian_group();
  SymbolExpression sum;
  for (const auto& tuple : components) {
    if (tuple.size() != group.dimension()) throw Error("fixed-point tuple has wrong length");
    std::vector<Character> reduced;
    for (const auto& c : tuple) reduced.push_back(g.reduce(c));
    if (!is_faithful(g, reduced)) {
      throw Error("tangent characters " + symbol_to_string(g, Symbol(reduced)) + " are not faithful");
    }
    sum.add(Symbol(std::move(reduced)));
  }
  return group.class_of(sum);
}

}  // namespace ebt
