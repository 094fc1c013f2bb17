#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ebt/birational.hpp"
#include "ebt/expression.hpp"
#include "ebt/lattice.hpp"
#include "ebt/subdivision.hpp"
#include "ebt/verify.hpp"

namespace ebt {

/// Produces a smooth fan refining a full-dimensional simplicial cone in Z^s.
using Subdivider = std::function<Fan(const Cone&)>;

inline Subdivider default_subdivider(SubdivisionMethod method = SubdivisionMethod::Canonical) {
  return [method](const Cone& c) { return subdivide_full(c, method); };
}

namespace detail {

inline void check_triple(const LatticeTriple& t, const AbelianGroup& g) {
  const std::size_t n = t.lattice.dimension();
  if (n == 0) throw Error("lattice must have positive dimension");
  if (t.chi.coords.size() != n) throw Error("chi must have one character per lattice basis vector");
  for (const auto& c : t.chi.coords) g.check_arity(c);
  if (t.cone.dim() == 0) throw Error("cone must have at least one generator");
  if (!is_faithful(g, t.chi.coords)) throw Error("chi does not induce a surjection onto A");
}

}  // namespace detail

enum class FaceSum {
  All,      // every face not in a proper face of the cone, signed by codimension (B side)
  Maximal,  // top-dimensional cones only; lower-dimensional cones vanish (M side)
};

/// Formal sum of symbols representing psi-tilde of a triple, using `subdivide` on the
/// cone written in coordinates of the saturated sublattice.
inline SymbolExpression psi_tilde_expression(const LatticeTriple& t, const AbelianGroup& g, const Subdivider& subdivide,
                                             FaceSum faces = FaceSum::All) {
  detail::check_triple(t, g);
  const std::size_t n = t.lattice.dimension(), s = t.cone.dim();
  std::vector<Character> chi;
  for (const auto& c : t.chi.coords) chi.push_back(g.reduce(c));

  const auto adapted = adapted_basis(t.cone, n);
  const auto b = apply_to_characters(adapted.basis_inverse, chi, g);
  for (std::size_t i = s; i < n; ++i)
    if (!g.is_zero(b[i])) throw Error("chi-condition fails for the saturated sublattice of the cone");
  const std::vector<Character> local(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(s));

  std::vector<IntVector> local_gens;
  for (std::size_t j = 0; j < s; ++j) local_gens.push_back(adapted.cone_coords.column(j));
  const Cone top(std::move(local_gens));
  const Fan fan = subdivide(top);

  SymbolExpression out;
  for (const auto& face : fan_faces(fan)) {
    if (faces == FaceSum::Maximal && face.size() < s) continue;
    if (in_proper_face(face, top)) continue;
    const IntMatrix rays = IntMatrix::from_columns(face, s);
    const auto sym = smooth_cone_symbol(rays, local, g, n);
    if (!sym) continue;
    out.add(*sym, ((s - face.size()) % 2 == 0) ? 1 : -1);
  }
  return out;
}

inline SymbolExpression psi_tilde_expression(const LatticeTriple& t, const AbelianGroup& g,
                                             SubdivisionMethod method = SubdivisionMethod::Canonical) {
  return psi_tilde_expression(t, g, default_subdivider(method));
}

inline GroupElementClass psi_tilde(const LatticeTriple& t, const BirationalGroup& target,
                                   SubdivisionMethod method = SubdivisionMethod::Canonical) {
  if (target.variant() != Variant::B) throw Error("psi-tilde takes values in the B variant");
  if (target.dimension() != t.lattice.dimension()) throw Error("lattice dimension differs from the target dimension");
  return class_of(psi_tilde_expression(t, target.abelian_group(), method), target);
}

/// psi-tilde of every cone of a star subdivision, with signs; cones failing the
/// chi-condition for their own span are left out.
inline SymbolExpression star_subdivision_image(const LatticeTriple& t, const std::vector<std::size_t>& face,
                                               const AbelianGroup& g) {
  SymbolExpression out;
  for (const auto& [cone, sign] : star_subdivision(t.cone, face)) {
    const LatticeTriple sub{t.lattice, t.chi, cone};
    if (!chi_condition(sub, g)) continue;
    out += psi_tilde_expression(sub, g).scaled(sign);
  }
  return out;
}

namespace detail {

inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps) {
  IntMatrix u = IntMatrix::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int k = 0; k < steps; ++k) {
    const std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    u.add_col_multiple(i, j, Integer(coef(rng)));
  }
  return u;
}

// Triple (Z^n, chi, first s columns of `basis`) with chi = sum_j basis_j (x) entries_j.
inline LatticeTriple triple_in_basis(const IntMatrix& basis, const std::vector<Character>& entries, std::size_t s,
                                     const AbelianGroup& g) {
  const std::size_t n = basis.rows();
  std::vector<IntVector> gens;
  for (std::size_t j = 0; j < s; ++j) gens.push_back(basis.column(j));
  return {Lattice::standard(n), ChiVector{apply_to_characters(basis, entries, g)}, Cone(std::move(gens))};
}

}  // namespace detail

/// Subdivision relations, round trip and subdivision independence for B_n(G).
inline Report verify_subdivision_relations(const AbelianGroup& g, std::size_t n, std::size_t samples,
                                           const GroupSource& source, std::uint32_t seed = 20240101) {
  Report report;
  report.suite = "subdivision";
  const std::string where = g.to_string() + ", n=" + std::to_string(n);
  const auto group = source(g, n, Variant::B);
  const auto& symbols = group->symbols();

  detail::IdentityCheck round_trip("round trip through identity triples (" + where + ")");
  for (const auto& sym : symbols) {
    const auto t = identity_triple(g, sym.entries());
    const auto image = psi_tilde_expression(t, g);
    round_trip.expect(image == SymbolExpression(sym) && classes_equal(class_of(image, *group), group->class_of(sym)),
                      symbol_to_string(g, sym));
  }
  round_trip.report_into(report);

  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
  for (std::size_t r = 2; r <= std::min<std::size_t>(n, 3); ++r) {
    detail::IdentityCheck check("star subdivision relation with r=" + std::to_string(r) + " vanishes (" + where + ")");
    for (std::size_t k = 0; k < samples; ++k) {
      const Symbol& sym = symbols[pick(rng)];
      const IntMatrix basis = detail::random_unimodular(rng, n, 3 * static_cast<int>(n));
      std::uniform_int_distribution<std::size_t> dim_pick(r, n);
      // a smooth cone of dimension s needs zero coefficients on the completing directions
      std::size_t s = dim_pick(rng);
      std::vector<Character> entries = sym.entries();
      std::size_t zeros = 0;
      for (const auto& e : entries)
        if (g.is_zero(e)) ++zeros;
      if (n - s > zeros) s = n;
      std::stable_partition(entries.begin(), entries.end(), [&](const Character& c) { return !g.is_zero(c); });
      const auto t = detail::triple_in_basis(basis, entries, s, g);
      std::vector<std::size_t> face(s);
      for (std::size_t i = 0; i < s; ++i) face[i] = i;
      std::shuffle(face.begin(), face.end(), rng);
      face.resize(r);
      const SymbolExpression diff = psi_tilde_expression(t, g) - star_subdivision_image(t, face, g);
      check.expect(class_of(diff, *group).is_zero(), symbol_to_string(g, sym) + " cone dim " + std::to_string(s));
    }
    check.report_into(report);
  }

  if (n == 2) {
    detail::IdentityCheck indep("psi-tilde independent of the smooth subdivision (" + where + ")");
    const std::vector<std::vector<IntVector>> cones = {
        {{1, 0}, {2, 3}}, {{1, 0}, {1, 5}}, {{2, 1}, {1, 3}}, {{3, -1}, {-1, 2}}};
    const Subdivider refined = [](const Cone& c) {
      Fan hj = hirzebruch_jung(c);
      const auto& rays = hj.front().generators();
      return stellar_subdivide(hj, {rays[0][0] + rays[1][0], rays[0][1] + rays[1][1]});
    };
    for (const auto& gens : cones) {
      for (const auto& sym : symbols) {
        const LatticeTriple t{Lattice::standard(2), ChiVector{sym.entries()}, Cone(gens)};
        const auto hj = psi_tilde_expression(t, g, SubdivisionMethod::Canonical);
        const auto st = psi_tilde_expression(t, g, SubdivisionMethod::Stellar);
        const auto rf = psi_tilde_expression(t, g, refined);
        const auto c = class_of(hj, *group);
        indep.expect(classes_equal(c, class_of(st, *group)) && classes_equal(c, class_of(rf, *group)),
                     symbol_to_string(g, sym));
      }
    }
    indep.report_into(report);
  }
  return report;
}

}  // namespace ebt
