#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ebt/integer.hpp"
#include "ebt/lattice.hpp"
#include "ebt/matrix.hpp"
#include "ebt/smith.hpp"

namespace ebt {

/// Simplicial fan given by its maximal cones, all in the same coordinates.
using Fan = std::vector<Cone>;

struct SignedCone {
  Cone cone;
  int sign = 1;
};

enum class SubdivisionMethod {
  Canonical,  // Hirzebruch-Jung in dimension 2, stellar otherwise
  Stellar,    // stellar at fundamental-box points in every dimension
};

namespace detail {

inline std::vector<Rational> solve_in_cone(const RatMatrix& inv, const IntVector& p) {
  return inv * std::vector<Rational>(p.begin(), p.end());
}

inline IntMatrix square_matrix(const Cone& c) { return c.matrix(c.dim()); }

inline bool is_unimodular_cone(const Cone& c) { return abs(determinant(square_matrix(c))) == 1; }

/// Nonzero lattice point in the fundamental parallelepiped of a full-dimensional
/// simplicial cone minimizing sum(lambda); ties broken lexicographically on lambda.
inline IntVector box_point(const Cone& c) {
  const std::size_t s = c.dim();
  const IntMatrix m = square_matrix(c);
  const Integer det = determinant(m);
  const Integer vol = abs(det);
  if (vol <= 1) throw Error("cone is already unimodular");
  const RatMatrix inv = inverse(to_rational(m));
  IntMatrix adj(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) {
      const Rational x = inv(i, j) * det;
      adj(i, j) = x.get_num();
    }
  const auto f = smith_normal_form(m);
  // residue classes Z^s / m Z^s are u_inverse * (c_1, ..., c_s), 0 <= c_i < d_i
  std::vector<Integer> counter(s, Integer(0));
  std::optional<std::vector<Integer>> best;
  Integer best_sum = 0;
  for (;;) {
    const IntVector x = f.u_inverse * counter;
    const IntVector lam_num = adj * x;
    std::vector<Integer> frac(s);
    bool nonzero = false;
    Integer sum = 0;
    for (std::size_t i = 0; i < s; ++i) {
      frac[i] = mod_floor(lam_num[i] * sgn(det), vol);
      if (sgn(frac[i]) != 0) nonzero = true;
      sum += frac[i];
    }
    if (nonzero && (!best || sum < best_sum || (sum == best_sum && frac < *best))) {
      best = frac;
      best_sum = sum;
    }
    std::size_t pos = 0;
    while (pos < s) {
      counter[pos] += 1;
      if (counter[pos] < f.diag[pos]) break;
      counter[pos] = 0;
      ++pos;
    }
    if (pos == s) break;
  }
  if (!best) throw Error("fundamental box has no interior lattice point");
  IntVector p = m * *best;
  for (auto& v : p) v /= vol;
  return p;
}

}  // namespace detail

/// Stellar subdivision of every cone of the fan containing p.
inline Fan stellar_subdivide(const Fan& fan, const IntVector& p) {
  Fan out;
  for (const auto& c : fan) {
    const auto lam = detail::solve_in_cone(inverse(to_rational(detail::square_matrix(c))), p);
    const bool contains = std::all_of(lam.begin(), lam.end(), [](const Rational& x) { return sgn(x) >= 0; });
    if (!contains) {
      out.push_back(c);
      continue;
    }
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (sgn(lam[i]) == 0) continue;
      auto gens = c.generators();
      gens[i] = p;
      out.emplace_back(std::move(gens));
    }
  }
  return out;
}

/// Refine a fan of full-dimensional cones by stellar subdivisions until every cone is unimodular.
inline Fan stellar_resolve(Fan fan) {
  for (;;) {
    auto it = std::find_if(fan.begin(), fan.end(), [](const Cone& c) { return !detail::is_unimodular_cone(c); });
    if (it == fan.end()) return fan;
    fan = stellar_subdivide(fan, detail::box_point(*it));
  }
}

/// Hirzebruch-Jung resolution of a 2-dimensional cone in Z^2; rays come out ordered
/// from the first generator to the second.
inline Fan hirzebruch_jung(const Cone& c) {
  if (c.dim() != 2) throw Error("Hirzebruch-Jung resolution needs a 2-dimensional cone");
  const Integer det = determinant(detail::square_matrix(c));
  if (sgn(det) == 0) throw Error("cone generators are linearly dependent");
  const Integer m = abs(det);
  if (m == 1) return {c};
  const IntVector& u = c.generators()[0];
  const IntVector& w = c.generators()[1];

  // e completes u to a basis with det(u, e) = sign(det), so w = alpha u + m e
  Integer g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), u[0].get_mpz_t(), u[1].get_mpz_t());
  IntVector e = sgn(det) > 0 ? IntVector{-y, x} : IntVector{y, -x};
  const Integer det_ue = u[0] * e[1] - u[1] * e[0];
  const Integer alpha = (w[0] * e[1] - w[1] * e[0]) / det_ue;
  // normal form w = -k u + m e' with 0 < k < m
  const Integer k = mod_floor(-alpha, m);
  const Integer t = (-k - alpha) / m;
  for (std::size_t i = 0; i < 2; ++i) e[i] -= t * u[i];

  std::vector<IntVector> rays{u, e};
  Integer prev = m, cur = k;
  while (sgn(cur) != 0) {
    const Integer b = (prev + cur - 1) / cur;
    const IntVector& v1 = rays[rays.size() - 1];
    const IntVector& v0 = rays[rays.size() - 2];
    rays.push_back({b * v1[0] - v0[0], b * v1[1] - v0[1]});
    const Integer next = b * cur - prev;
    prev = cur;
    cur = next;
  }
  if (rays.back() != w) throw Error("Hirzebruch-Jung recursion did not reach the second generator");
  Fan fan;
  for (std::size_t i = 0; i + 1 < rays.size(); ++i) fan.emplace_back(std::vector<IntVector>{rays[i], rays[i + 1]});
  return fan;
}

/// Regular subdivision of a full-dimensional simplicial cone in Z^s.
inline Fan subdivide_full(const Cone& c, SubdivisionMethod method = SubdivisionMethod::Canonical) {
  const IntMatrix m = detail::square_matrix(c);
  if (sgn(determinant(m)) == 0) throw Error("cone generators are linearly dependent");
  if (c.dim() == 2 && method == SubdivisionMethod::Canonical) return hirzebruch_jung(c);
  return stellar_resolve({c});
}

/// Cones of the star subdivision of a cone at the sum of the generators indexed
/// by `face`, with signs (-1)^(s - dim) making the formal sum equal to the cone.
inline std::vector<SignedCone> star_subdivision(const Cone& c, const std::vector<std::size_t>& face) {
  const std::size_t s = c.dim(), r = face.size();
  if (r < 2) throw Error("star subdivision needs a face of dimension at least 2");
  std::vector<bool> in_face(s, false);
  for (auto i : face) {
    if (i >= s || in_face[i]) throw Error("invalid face index");
    in_face[i] = true;
  }
  const auto& gens = c.generators();
  IntVector v(gens[face[0]].size(), Integer(0));
  for (auto i : face)
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += gens[i][k];

  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << r); ++mask) {
    std::vector<std::size_t> sub;
    for (std::size_t j = 0; j < r; ++j)
      if (mask & (std::size_t{1} << j)) sub.push_back(face[j]);
    subsets.push_back(std::move(sub));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  std::vector<SignedCone> out;
  for (const auto& sub : subsets) {
    std::vector<IntVector> g{v};
    for (auto i : sub) g.push_back(gens[i]);
    for (std::size_t i = 0; i < s; ++i)
      if (!in_face[i]) g.push_back(gens[i]);
    const std::size_t dim = g.size();
    out.push_back({Cone(std::move(g)), ((s - dim) % 2 == 0) ? 1 : -1});
  }
  return out;
}

/// All faces (nonempty ray subsets, rays sorted) of the cones of a fan.
inline std::set<std::vector<IntVector>> fan_faces(const Fan& fan) {
  std::set<std::vector<IntVector>> faces;
  for (const auto& c : fan) {
    const std::size_t s = c.dim();
    for (std::size_t mask = 1; mask < (std::size_t{1} << s); ++mask) {
      std::vector<IntVector> f;
      for (std::size_t i = 0; i < s; ++i)
        if (mask & (std::size_t{1} << i)) f.push_back(c.generators()[i]);
      std::sort(f.begin(), f.end());
      faces.insert(std::move(f));
    }
  }
  return faces;
}

/// Whether every ray lies in one common proper face of the full-dimensional cone c.
inline bool in_proper_face(const std::vector<IntVector>& rays, const Cone& c) {
  const RatMatrix inv = inverse(to_rational(detail::square_matrix(c)));
  std::vector<bool> support(c.dim(), false);
  for (const auto& r : rays) {
    const auto lam = detail::solve_in_cone(inv, r);
    for (std::size_t i = 0; i < lam.size(); ++i)
      if (sgn(lam[i]) != 0) support[i] = true;
  }
  return !std::all_of(support.begin(), support.end(), [](bool b) { return b; });
}

}  // namespace ebt
