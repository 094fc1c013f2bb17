#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ebt/characters.hpp"
#include "ebt/integer.hpp"
#include "ebt/matrix.hpp"
#include "ebt/smith.hpp"

namespace ebt {

/// A full-rank lattice in Q^n: integer column span of basis / denominator.
/// Everything attached to a lattice (cone generators, chi) is expressed in
/// coordinates with respect to this basis.
class Lattice {
 public:
  Lattice() = default;
  Lattice(IntMatrix basis, Integer denominator) : basis_(std::move(basis)), denominator_(std::move(denominator)) {
    if (basis_.rows() != basis_.cols()) throw Error("lattice basis must be square");
    if (sgn(denominator_) <= 0) throw Error("lattice denominator must be positive");
    if (sgn(determinant(basis_)) == 0) throw Error("lattice basis is singular");
    normalize();
  }

  static Lattice standard(std::size_t n) { return Lattice(IntMatrix::identity(n), 1); }

  std::size_t dimension() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }
  const Integer& denominator() const { return denominator_; }

  RatMatrix rational_basis() const {
    RatMatrix r = to_rational(basis_);
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) /= denominator_;
    return r;
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  void normalize() {
    Integer g = denominator_;
    for (std::size_t i = 0; i < basis_.rows(); ++i)
      for (std::size_t j = 0; j < basis_.cols(); ++j) g = gcd(g, basis_(i, j));
    if (g > 1) {
      denominator_ /= g;
      for (std::size_t i = 0; i < basis_.rows(); ++i)
        for (std::size_t j = 0; j < basis_.cols(); ++j) basis_(i, j) /= g;
    }
  }

  IntMatrix basis_;
  Integer denominator_ = 1;
};

/// chi = sum_i e_i (x) a_i with respect to the lattice basis e_i.
struct ChiVector {
  std::vector<Character> coords;
  friend bool operator==(const ChiVector&, const ChiVector&) = default;
};

/// Simplicial cone given by primitive generators in lattice coordinates.
class Cone {
 public:
  Cone() = default;
  explicit Cone(std::vector<IntVector> generators) : generators_(std::move(generators)) {
    for (auto& g : generators_) make_primitive(g);
  }

  const std::vector<IntVector>& generators() const { return generators_; }
  std::size_t dim() const { return generators_.size(); }

  /// n x s matrix whose columns are the generators.
  IntMatrix matrix(std::size_t n) const {
    for (const auto& g : generators_)
      if (g.size() != n) throw Error("cone generator has wrong length");
    return IntMatrix::from_columns(generators_, n);
  }

  static void make_primitive(IntVector& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (sgn(g) == 0) throw Error("cone generator must be nonzero");
    if (g != 1)
      for (auto& x : v) x /= g;
  }

  friend bool operator==(const Cone&, const Cone&) = default;

 private:
  std::vector<IntVector> generators_;
};

struct LatticeTriple {
  Lattice lattice;
  ChiVector chi;
  Cone cone;
};

/// The identity triple (Z^n, sum e_i (x) a_i, positive orthant).
inline LatticeTriple identity_triple(const AbelianGroup& g, const std::vector<Character>& entries) {
  const std::size_t n = entries.size();
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, Integer(0));
    e[i] = 1;
    gens.push_back(std::move(e));
  }
  ChiVector chi;
  for (const auto& c : entries) chi.coords.push_back(g.reduce(c));
  return {Lattice::standard(n), std::move(chi), Cone(std::move(gens))};
}

/// b_j = sum_i T(j, i) a_i in A.
inline std::vector<Character> apply_to_characters(const IntMatrix& t, const std::vector<Character>& a,
                                                  const AbelianGroup& g) {
  if (t.cols() != a.size()) throw Error("character vector has wrong length");
  const auto& d = g.invariant_factors();
  std::vector<Character> out(t.rows(), g.zero());
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Integer mod = static_cast<long>(d[k]);
    for (std::size_t j = 0; j < t.rows(); ++j) {
      Integer acc = 0;
      for (std::size_t i = 0; i < a.size(); ++i) acc += t(j, i) * static_cast<long>(a[i].coords[k]);
      out[j].coords[k] = to_int64(mod_floor(acc, mod));
    }
  }
  return out;
}

namespace detail {

inline void require_independent(const IntMatrix& gens) {
  if (rank_fraction_free(gens) != gens.cols()) throw Error("cone generators are linearly dependent");
}

inline bool all_units(const SmithForm<Integer>& f) {
  for (std::size_t i = 0; i < f.rank; ++i)
    if (f.diag[i] != 1) return false;
  return true;
}

}  // namespace detail

/// Whether the cone is spanned by part of a lattice basis.
inline bool is_smooth(const Cone& cone, const Lattice& lattice) {
  const IntMatrix gens = cone.matrix(lattice.dimension());
  detail::require_independent(gens);
  SnfOptions opts;
  opts.compute_v = false;
  opts.compute_u_inverse = false;
  return detail::all_units(smith_normal_form(gens, opts));
}

inline bool is_basic(const Cone& cone, const Lattice& lattice) {
  return cone.dim() == lattice.dimension() && is_smooth(cone, lattice);
}

/// Unimodular n x n matrix whose first t columns are the columns of `rays`;
/// throws if the rays do not extend to a basis.
inline IntMatrix complete_to_basis(const IntMatrix& rays) {
  const std::size_t n = rays.rows(), t = rays.cols();
  const auto f = smith_normal_form(rays);
  if (f.rank != t || !detail::all_units(f)) throw Error("cone is not smooth");
  IntMatrix basis = f.u_inverse;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < t; ++j) basis(i, j) = rays(i, j);
  return basis;
}

/// Basis of L adapted to the cone: the first s columns span the saturated
/// sublattice L cap (cone (x) R), and `cone_coords` holds the generators
/// in those s coordinates.
struct AdaptedBasis {
  IntMatrix basis;          // n x n unimodular
  IntMatrix basis_inverse;  // n x n
  IntMatrix cone_coords;    // s x s, columns are the generators
};

inline AdaptedBasis adapted_basis(const Cone& cone, std::size_t n) {
  const IntMatrix gens = cone.matrix(n);
  detail::require_independent(gens);
  SnfOptions opts;
  opts.compute_v = false;
  const auto f = smith_normal_form(gens, opts);
  return {f.u_inverse, f.U, (f.U * gens).row_range(0, cone.dim())};
}

/// chi in Im(L' (x) A -> L (x) A), L' spanned by the cone generators.
inline bool chi_condition(const LatticeTriple& t, const AbelianGroup& g) {
  const std::size_t n = t.lattice.dimension();
  if (t.chi.coords.size() != n) throw Error("chi has wrong length");
  const IntMatrix gens = t.cone.matrix(n);
  detail::require_independent(gens);
  SnfOptions opts;
  opts.compute_v = false;
  opts.compute_u_inverse = false;
  const auto f = smith_normal_form(gens, opts);
  const auto& d = g.invariant_factors();
  for (std::size_t k = 0; k < d.size(); ++k) {
    IntVector rhs;
    for (const auto& c : t.chi.coords) rhs.push_back(Integer(static_cast<long>(c.coords[k])));
    if (!solvable_mod(f, rhs, Integer(static_cast<long>(d[k])))) return false;
  }
  return true;
}

/// Same condition for the saturated sublattice L cap (cone (x) R).
inline bool chi_condition_saturated(const LatticeTriple& t, const AbelianGroup& g) {
  const std::size_t n = t.lattice.dimension();
  const auto adapted = adapted_basis(t.cone, n);
  const auto b = apply_to_characters(adapted.basis_inverse, t.chi.coords, g);
  for (std::size_t i = t.cone.dim(); i < n; ++i)
    if (!g.is_zero(b[i])) return false;
  return true;
}

/// Symbol of a triple whose (smooth, t-dimensional) rays satisfy the
/// chi-condition: chi = sum_j r_j (x) x_j gives [x_1, ..., x_t, 0, ..., 0]
/// padded to `n` entries. Returns nullopt when the chi-condition fails.
inline std::optional<Symbol> smooth_cone_symbol(const IntMatrix& rays, const std::vector<Character>& chi,
                                                const AbelianGroup& g, std::size_t n) {
  const std::size_t dim = rays.rows(), t = rays.cols();
  const IntMatrix basis = complete_to_basis(rays);
  const auto coords = apply_to_characters(inverse_unimodular(basis), chi, g);
  for (std::size_t i = t; i < dim; ++i)
    if (!g.is_zero(coords[i])) return std::nullopt;
  std::vector<Character> entries(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(t));
  while (entries.size() < n) entries.push_back(g.zero());
  return Symbol(std::move(entries));
}

/// [a_1, ..., a_n] for chi = sum f_j (x) a_j over the basic cone's generators f_j.
inline Symbol symbol_of_basic_triple(const LatticeTriple& t, const AbelianGroup& g) {
  const std::size_t n = t.lattice.dimension();
  if (!is_basic(t.cone, t.lattice)) throw Error("cone is not basic");
  if (!is_faithful(g, t.chi.coords)) throw Error("chi does not induce a surjection onto A");
  return *smooth_cone_symbol(t.cone.matrix(n), t.chi.coords, g, n);
}

/// Integer coordinates in `to` of a vector given in `from` coordinates.
inline IntVector change_coordinates(const Lattice& from, const Lattice& to, const IntVector& v) {
  const RatMatrix m = inverse(to.rational_basis()) * from.rational_basis();
  std::vector<Rational> rv(v.begin(), v.end());
  const auto w = m * rv;
  IntVector out;
  for (const auto& x : w) {
    if (x.get_den() != 1) throw Error("vector does not lie in the target lattice");
    out.push_back(x.get_num());
  }
  return out;
}

/// chi re-expressed in the basis of `to`. Requires the change-of-basis
/// denominators to be invertible modulo the invariant factors of A.
inline ChiVector transport_chi(const ChiVector& chi, const Lattice& from, const Lattice& to, const AbelianGroup& g) {
  const std::size_t n = from.dimension();
  if (to.dimension() != n || chi.coords.size() != n) throw Error("dimension mismatch in chi transport");
  const RatMatrix m = inverse(to.rational_basis()) * from.rational_basis();
  Integer den = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) den = lcm(den, m(i, j).get_den());
  IntMatrix num(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) num(i, j) = m(i, j).get_num() * (den / m(i, j).get_den());
  std::vector<Character> scaled = apply_to_characters(num, chi.coords, g);
  const auto& d = g.invariant_factors();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Integer mod = static_cast<long>(d[k]);
    if (gcd(den, mod) != 1) throw Error("change of lattice has denominator " + den.get_str() + " not invertible in A");
    const Integer inv = mod_inverse(mod_floor(den, mod), mod);
    for (auto& c : scaled) c.coords[k] = to_int64(mod_floor(inv * static_cast<long>(c.coords[k]), mod));
  }
  ChiVector out{std::move(scaled)};
  if (!is_faithful(g, out.coords)) throw Error("transported chi is not faithful");
  return out;
}

}  // namespace ebt
