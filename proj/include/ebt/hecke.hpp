#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ebt/birational.hpp"
#include "ebt/lattice.hpp"
#include "ebt/psi.hpp"
#include "ebt/verify.hpp"

namespace ebt {

struct HeckeParams {
  std::int64_t ell = 2;
  std::size_t r = 1;
};

struct HeckeLimits {
  std::size_t max_dimension = 3;
  std::int64_t max_ell = 7;
  bool allow_large = false;
};

inline void validate(const HeckeParams& p, const AbelianGroup& g, std::size_t n, const HeckeLimits& limits = {}) {
  if (n < 2) throw Error("Hecke operators need n >= 2");
  if (!is_prime(p.ell)) throw Error("ell = " + std::to_string(p.ell) + " is not prime");
  if (g.order() % p.ell == 0)
    throw Error("ell must be a prime not dividing |G|, but ell = " + std::to_string(p.ell) + " divides |" +
                g.to_string() + "| = " + std::to_string(g.order()));
  if (p.r < 1 || p.r + 1 > n) throw Error("r must satisfy 1 <= r <= n-1");
  if (!limits.allow_large && (n > limits.max_dimension || p.ell > limits.max_ell))
    throw Error("Hecke computation with n=" + std::to_string(n) + ", ell=" + std::to_string(p.ell) +
                " exceeds the default scale guard (n <= " + std::to_string(limits.max_dimension) +
                ", ell <= " + std::to_string(limits.max_ell) + ")");
}

/// Number of r-dimensional subspaces of F_ell^n.
inline Integer gaussian_binomial(std::size_t n, std::size_t r, std::int64_t ell) {
  if (r > n) return 0;
  Integer num = 1, den = 1;
  Integer q = static_cast<long>(ell);
  for (std::size_t i = 0; i < r; ++i) {
    Integer a, b;
    mpz_pow_ui(a.get_mpz_t(), q.get_mpz_t(), n - i);
    mpz_pow_ui(b.get_mpz_t(), q.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

/// Overlattices L ⊂ L^ ⊂ (1/ell) L with L^/L ≅ (Z/ell)^r, one per reduced
/// row-echelon form over F_ell. Pivot sets are visited by increasing bitmask,
/// free entries lexicographically.
inline std::vector<Lattice> enumerate_overlattices(const Lattice& base, std::int64_t ell, std::size_t r) {
  const std::size_t n = base.dimension();
  if (!is_prime(ell)) throw Error("ell must be prime");
  if (r > n) throw Error("r exceeds the lattice dimension");
  std::vector<Lattice> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != r) continue;
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) pivots.push_back(i);
    // free positions (row j, column c) with c > pivot_j and c not a pivot
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t c = pivots[j] + 1; c < n; ++c)
        if (!(mask & (std::size_t{1} << c))) free.emplace_back(j, c);
    std::vector<std::int64_t> values(free.size(), 0);
    for (;;) {
      IntMatrix m(n, n);
      std::size_t row = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (row < r && pivots[row] == i) {
          m(i, i) = 1;
          for (std::size_t f = 0; f < free.size(); ++f)
            if (free[f].first == row) m(free[f].second, i) = static_cast<long>(values[f]);
          ++row;
        } else {
          m(i, i) = static_cast<long>(ell);
        }
      }
      out.emplace_back(base.basis() * m, base.denominator() * static_cast<long>(ell));
      std::size_t pos = free.size();
      while (pos > 0) {
        if (++values[pos - 1] < ell) break;
        values[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }
  return out;
}

/// Triple (L^, chi, Lambda) for an overlattice of Z^n: chi and the positive orthant
/// re-expressed in the basis of L^.
inline LatticeTriple overlattice_triple(const LatticeTriple& t, const Lattice& over, const AbelianGroup& g) {
  std::vector<IntVector> gens;
  for (const auto& v : t.cone.generators()) gens.push_back(change_coordinates(t.lattice, over, v));
  return {over, transport_chi(t.chi, t.lattice, over, g), Cone(std::move(gens))};
}

/// Sum of psi-tilde over the overlattices of the triple's lattice.
/// With FaceSum::Maximal only top-dimensional cones count, which is the operator on M_n(G).
inline SymbolExpression hecke_triple_expression(const HeckeParams& p, const LatticeTriple& t, const AbelianGroup& g,
                                                const HeckeLimits& limits = {}, FaceSum faces = FaceSum::All) {
  validate(p, g, t.lattice.dimension(), limits);
  SymbolExpression out;
  for (const auto& over : enumerate_overlattices(t.lattice, p.ell, p.r))
    out += psi_tilde_expression(overlattice_triple(t, over, g), g, default_subdivider(), faces);
  return out;
}

/// T_{ell,r} applied to a formal sum of symbols, each symbol represented by its identity triple.
inline SymbolExpression hecke_expression(const HeckeParams& p, const SymbolExpression& expr, const AbelianGroup& g,
                                         std::size_t n, const HeckeLimits& limits = {}, FaceSum faces = FaceSum::All) {
  validate(p, g, n, limits);
  SymbolExpression out;
  for (const auto& [sym, coeff] : expr.terms()) {
    if (sym.size() != n) throw Error("symbol " + symbol_to_string(g, sym) + " has the wrong length");
    out += hecke_triple_expression(p, identity_triple(g, sym.entries()), g, limits, faces).scaled(coeff);
  }
  return out;
}

namespace detail {

inline FaceSum faces_for(const BirationalGroup& group) {
  switch (group.variant()) {
    case Variant::B:
      return FaceSum::All;
    case Variant::M:
      return FaceSum::Maximal;
    default:
      throw Error("Hecke operators act on the B and M variants");
  }
}

}  // namespace detail

/// T_{ell,r} on B_n(G) (all faces) or M_n(G) (top-dimensional cones), by group variant.
inline GroupElementClass hecke_apply(const HeckeParams& p, const SymbolExpression& expr, const BirationalGroup& group,
                                     const HeckeLimits& limits = {}) {
  const FaceSum faces = detail::faces_for(group);
  return class_of(hecke_expression(p, expr, group.abelian_group(), group.dimension(), limits, faces), group);
}

/// Matrix of T_{ell,r} on generator coordinates: column j is the image of symbol j.
inline IntMatrix hecke_matrix(const HeckeParams& p, const BirationalGroup& group, const HeckeLimits& limits = {}) {
  const FaceSum faces = detail::faces_for(group);
  const auto& syms = group.symbols();
  IntMatrix m(syms.size(), syms.size());
  for (std::size_t j = 0; j < syms.size(); ++j) {
    const IntVector col = group.coords_of(hecke_expression(p, SymbolExpression(syms[j]), group.abelian_group(),
                                                           group.dimension(), limits, faces));
    for (std::size_t i = 0; i < syms.size(); ++i) m(i, j) = col[i];
  }
  return m;
}

/// Endomorphism of the free part induced by a generator-level matrix that respects the relations.
inline IntMatrix free_part_matrix(const IntMatrix& t, const PresentedAbelianGroup& g) {
  const auto& snf = g.smith();
  if (!snf.has_u_inverse) throw Error("presentation lacks U^{-1}");
  const std::size_t rank = g.rank(), first = g.num_generators() - rank;
  IntMatrix out(rank, rank);
  for (std::size_t j = 0; j < rank; ++j) {
    const IntVector f = g.free_part(t * snf.u_inverse.column(first + j));
    for (std::size_t i = 0; i < rank; ++i) out(i, j) = f[i];
  }
  return out;
}

/// T_{ell,r} on B_n(G) (x) Q obtained from the operator on M_n(G) through the isomorphism
/// mu (x) Q, in the free coordinates of B_n(G).
inline RatMatrix rational_hecke_matrix(const HeckeParams& p, const BirationalGroup& b_group,
                                       const BirationalGroup& m_group, const HeckeLimits& limits = {}) {
  if (b_group.variant() != Variant::B || m_group.variant() != Variant::M)
    throw Error("expected the B and M groups of the same G and n");
  const auto cmp = compare_over_q(b_group, m_group);
  if (!cmp.iso_over_q) throw Error("mu is not an isomorphism over Q for this group");
  const RatMatrix f = to_rational(induced_free_map(b_group, m_group));
  const RatMatrix t = to_rational(free_part_matrix(hecke_matrix(p, m_group, limits), *m_group.presented()));
  return inverse(f) * t * f;
}

namespace detail {

// Whether every column of the integer matrix is zero in the group.
inline bool columns_vanish(const IntMatrix& m, const GroupPtr& g) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!GroupElementClass(g, m.column(j)).is_zero()) return false;
  return true;
}

// Free-part coordinates of every column, as a rank x cols matrix.
inline IntMatrix free_parts(const IntMatrix& m, const PresentedAbelianGroup& g) {
  IntMatrix out(g.rank(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const IntVector f = g.free_part(m.column(j));
    for (std::size_t i = 0; i < f.size(); ++i) out(i, j) = f[i];
  }
  return out;
}

}  // namespace detail

struct CommutationResult {
  bool over_q = false;
  bool integral = false;
};

/// Whether T1 T2 and T2 T1 agree on every generator, over Q and integrally.
inline CommutationResult hecke_commute(const IntMatrix& t1, const IntMatrix& t2, const BirationalGroup& group) {
  IntMatrix diff = t1 * t2;
  const IntMatrix other = t2 * t1;
  for (std::size_t i = 0; i < diff.rows(); ++i)
    for (std::size_t j = 0; j < diff.cols(); ++j) diff(i, j) -= other(i, j);
  const auto& presented = *group.presented();
  CommutationResult out;
  out.integral = detail::columns_vanish(diff, group.presented());
  const IntMatrix free = detail::free_parts(diff, presented);
  out.over_q = true;
  for (std::size_t i = 0; i < free.rows(); ++i)
    for (std::size_t j = 0; j < free.cols(); ++j)
      if (sgn(free(i, j)) != 0) out.over_q = false;
  return out;
}

namespace detail {

inline std::string hecke_label(std::int64_t ell, std::size_t r) {
  return "T_{" + std::to_string(ell) + "," + std::to_string(r) + "}";
}

// Relation columns of `group` whose image under t is nonzero, with the first as witness.
inline std::pair<std::size_t, std::string> relation_failures(const IntMatrix& t, const BirationalGroup& group) {
  const auto& relations = group.presented()->relations();
  const IntMatrix images = t * relations.to_dense();
  std::size_t failures = 0;
  std::string witness;
  for (std::size_t j = 0; j < images.cols(); ++j) {
    if (GroupElementClass(group.presented(), images.column(j)).is_zero()) continue;
    if (failures++ == 0) {
      SymbolExpression rel;
      for (const auto& [row, coeff] : relations.columns[j]) rel.add(group.symbols()[row], coeff);
      witness = "; first nonzero image: relation " + expression_to_string(group.abelian_group(), rel) + " = 0";
    }
  }
  return {failures, witness};
}

}  // namespace detail

/// Well-definedness of T_{ell,r} on B_n(G) and on M_n(G), and pairwise commutation of the
/// operators on B_n(G) (x) Q carried over from M_n(G) by mu.
inline Report verify_hecke(const AbelianGroup& g, std::size_t n, const std::vector<std::int64_t>& ells, std::size_t r,
                           const GroupSource& source, const HeckeLimits& limits = {}) {
  Report report;
  report.suite = "hecke";
  const std::string where = g.to_string() + ", n=" + std::to_string(n) + ", r=" + std::to_string(r);
  const auto b_group = source(g, n, Variant::B);
  const auto m_group = source(g, n, Variant::M);
  std::vector<IntMatrix> b_ops, m_ops;
  for (const auto ell : ells) {
    const HeckeParams p{ell, r};
    validate(p, g, n, limits);
    b_ops.push_back(hecke_matrix(p, *b_group, limits));
    m_ops.push_back(hecke_matrix(p, *m_group, limits));
    const std::string count = gaussian_binomial(n, r, ell).get_str() + " overlattices";
    const auto [b_fail, b_witness] = detail::relation_failures(b_ops.back(), *b_group);
    report.add(detail::hecke_label(ell, r) + " respects all relations of B (" + where + ")", b_fail == 0,
               std::to_string(b_fail) + " of " + std::to_string(b_group->presented()->relations().cols()) +
                   " relation images nonzero, " + count + b_witness);
    const auto [m_fail, m_witness] = detail::relation_failures(m_ops.back(), *m_group);
    report.add(detail::hecke_label(ell, r) + " respects all relations of M (" + where + ")", m_fail == 0,
               std::to_string(m_fail) + " of " + std::to_string(m_group->presented()->relations().cols()) +
                   " relation images nonzero, " + count + m_witness);
  }
  for (std::size_t a = 0; a < ells.size(); ++a)
    for (std::size_t b = a + 1; b < ells.size(); ++b) {
      const std::string label = detail::hecke_label(ells[a], r) + " and " + detail::hecke_label(ells[b], r);
      const RatMatrix ta = rational_hecke_matrix({ells[a], r}, *b_group, *m_group, limits);
      const RatMatrix tb = rational_hecke_matrix({ells[b], r}, *b_group, *m_group, limits);
      const bool over_q = ta * tb == tb * ta;
      const auto b_int = hecke_commute(b_ops[a], b_ops[b], *b_group);
      const auto m_int = hecke_commute(m_ops[a], m_ops[b], *m_group);
      report.add(label + " commute on B (x) Q (" + where + ")", over_q,
                 std::string("integral commutation on generators: B ") + (b_int.integral ? "yes" : "no") + ", M " +
                     (m_int.integral ? "yes" : "no"));
    }
  return report;
}

}  // namespace ebt
