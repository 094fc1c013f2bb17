#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ebt/birational.hpp"

namespace ebt {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // exact values on success, a witness on failure
};

struct Report {
  std::string suite;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  void add(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
  void append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }
};

inline std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p <= bound; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

inline std::vector<std::int64_t> units_mod(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t a = 1; a < n; ++a)
    if (std::gcd(a, n) == 1) out.push_back(a);
  return out;
}

inline std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  return to_int64(mod_inverse(Integer(static_cast<long>(mod_floor(a, p))), Integer(static_cast<long>(p))));
}

namespace detail {

// Accumulates a quantified identity: one check, first failing witness kept.
class IdentityCheck {
 public:
  explicit IdentityCheck(std::string name) : name_(std::move(name)) {}

  void expect(bool ok, const std::string& witness) {
    ++instances_;
    if (!ok && passed_) {
      passed_ = false;
      witness_ = witness;
    }
  }
  void skip(std::string why) { skipped_ = std::move(why); }

  void report_into(Report& r) const {
    std::string detail;
    if (!skipped_.empty()) {
      detail = "skipped: " + skipped_;
    } else if (passed_) {
      detail = std::to_string(instances_) + " instances";
    } else {
      detail = "counterexample: " + witness_;
    }
    r.add(name_, passed_, detail);
  }

 private:
  std::string name_;
  bool passed_ = true;
  std::size_t instances_ = 0;
  std::string witness_;
  std::string skipped_;
};

}  // namespace detail

/// Checks the two-dimensional identities behind the torsion bound for
/// delta = [a,0] + [-a,0] in B_2(Z/p).
inline Report verify_lemma_suite(std::int64_t p, const GroupSource& source) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  const AbelianGroup g = AbelianGroup::cyclic(p);
  const auto group = source(g, 2, Variant::B);
  auto sym = [&](std::int64_t x, std::int64_t y) { return make_cyclic_symbol(g, {x, y}); };
  auto cls = [&](const SymbolExpression& e) { return group->class_of(e); };
  auto sum = [&](std::initializer_list<std::pair<std::int64_t, std::int64_t>> terms) {
    SymbolExpression e;
    for (const auto& [x, y] : terms) e.add(sym(x, y));
    return cls(e);
  };
  const auto units = units_mod(p);
  const auto delta = delta_class(*group, 1);
  const std::string tag = " (p=" + std::to_string(p) + ")";
  auto pair_str = [](std::int64_t a, std::int64_t b) {
    return "a=" + std::to_string(a) + ", b=" + std::to_string(b);
  };

  Report r;
  r.suite = "lemmas";

  detail::IdentityCheck l72("[a,b]+[a,-b]=[a,0]" + tag);
  detail::IdentityCheck l73("[a,0]+[-a,0]=[a,b]+[a,-b]+[-a,b]+[-a,-b], independent of a,b" + tag);
  detail::IdentityCheck l74("[a,0]=[a,b]+[-b,a+b]+[-a-b,a] for a+b!=0" + tag);
  detail::IdentityCheck l75("delta=[a,b]+[-b,a+b]+[-a-b,a]+[-a,-b]+[b,-a-b]+[a+b,-a]" + tag);
  for (auto a : units) {
    for (auto b : units) {
      l72.expect(classes_equal(sum({{a, b}, {a, -b}}), sum({{a, 0}})), pair_str(a, b));
      const auto four = sum({{a, b}, {a, -b}, {-a, b}, {-a, -b}});
      l73.expect(classes_equal(sum({{a, 0}, {-a, 0}}), four) && classes_equal(four, delta), pair_str(a, b));
      if (mod_floor(a + b, p) == 0) continue;
      l74.expect(classes_equal(sum({{a, 0}}), sum({{a, b}, {-b, a + b}, {-a - b, a}})), pair_str(a, b));
      l75.expect(classes_equal(delta, sum({{a, b}, {-b, a + b}, {-a - b, a}, {-a, -b}, {b, -a - b}, {a + b, -a}})),
                 pair_str(a, b));
    }
  }
  l72.report_into(r);
  l73.report_into(r);
  l74.report_into(r);
  l75.report_into(r);

  detail::IdentityCheck diag_sum("sum_a [a,a] = ((p-1)/2) delta" + tag);
  detail::IdentityCheck minus_two("sum_a [a,-2a] = 0" + tag);
  detail::IdentityCheck triple("sum_a [a,ba]+[a,b'a]+[a,b''a] = ((p-1)/2) delta" + tag);
  detail::IdentityCheck cube("sum_a [a,ba] = ((p-1)/6) delta for primitive cube roots b" + tag);
  if (p == 2) {
    const std::string why = "(p-1)/2 is not an integer for p = 2";
    diag_sum.skip(why);
    minus_two.skip(why);
    triple.skip(why);
    cube.skip(why);
  } else {
    SymbolExpression s1, s2;
    for (auto a : units) {
      s1.add(sym(a, a));
      s2.add(sym(a, -2 * a));
    }
    diag_sum.expect(classes_equal(cls(s1), delta.scaled((p - 1) / 2)), "sum differs");
    minus_two.expect(cls(s2).is_zero(), "sum is nonzero");

    std::size_t cube_roots = 0;
    for (auto beta : units) {
      if (beta == p - 1) continue;
      const std::int64_t beta1 = mod_floor(-inverse_mod(beta, p) - 1, p);
      const std::int64_t beta2 = mod_floor(-inverse_mod(beta + 1, p), p);
      SymbolExpression t;
      for (auto a : units) {
        t.add(sym(a, beta * a));
        t.add(sym(a, beta1 * a));
        t.add(sym(a, beta2 * a));
      }
      triple.expect(classes_equal(cls(t), delta.scaled((p - 1) / 2)), "beta=" + std::to_string(beta));
      const bool primitive_cube_root = mod_floor(beta * beta + beta + 1, p) == 0 && beta != 1;
      if (primitive_cube_root) {
        ++cube_roots;
        SymbolExpression c;
        for (auto a : units) c.add(sym(a, beta * a));
        cube.expect(beta == beta1 && beta == beta2 && classes_equal(cls(c), delta.scaled((p - 1) / 6)),
                    "beta=" + std::to_string(beta));
      }
    }
    const bool expect_roots = p % 3 == 1;
    cube.expect(cube_roots == (expect_roots ? 2u : 0u),
                std::to_string(cube_roots) + " primitive cube roots found");
    if (!expect_roots) cube.skip("no primitive cube roots of unity since p != 1 mod 3");
  }
  diag_sum.report_into(r);
  minus_two.report_into(r);
  triple.report_into(r);
  cube.report_into(r);
  return r;
}

/// Delta vanishes for p <= 5 and is killed by (p^2-1)/24 for primes p >= 7;
/// for composite N it is torsion. Exact orders are reported.
inline Report verify_theorem_pn(const std::vector<std::int64_t>& moduli, std::size_t n, const GroupSource& source) {
  Report r;
  r.suite = "pn";
  for (auto N : moduli) {
    const AbelianGroup g = AbelianGroup::cyclic(N);
    const auto group = source(g, n, Variant::B);
    const auto base = delta_class(*group, 1);
    const auto order = class_order(base);
    std::ostringstream name;
    name << "delta in B_" << n << "(Z/" << N << ")";
    bool independent = true;
    bool all_finite = true;
    std::string orders;
    for (auto a : units_mod(N)) {
      const auto d = delta_class(*group, a);
      const auto o = class_order(d);
      if (!o) all_finite = false;
      if (!classes_equal(d, base)) independent = false;
      orders += (orders.empty() ? "" : ",") + order_to_string(o);
    }
    if (is_prime(N)) {
      bool ok = false;
      std::string expectation;
      if (N <= 5) {
        ok = order && *order == 1;
        expectation = "expected 1";
      } else {
        const Integer bound = Integer(static_cast<long>(N * N - 1)) / 24;
        ok = order && detail::divides(*order, bound);
        expectation = "expected divisor of " + bound.get_str();
      }
      r.add(name.str() + " order", ok, "order " + order_to_string(order) + ", " + expectation);
      r.add(name.str() + " independent of a", independent, "orders per unit a: " + orders);
    } else {
      r.add(name.str() + " torsion for all units a", all_finite, "orders per unit a: " + orders);
    }
  }
  return r;
}

/// [0,0,1,...] vanishes for p <= 5, is killed by (p^2-1)/24 for p >= 7, and
/// is torsion for composite N; every symbol with two zero entries is torsion.
inline Report verify_theorem_001N(const std::vector<std::int64_t>& moduli, std::size_t n, const GroupSource& source) {
  if (n < 3) throw Error("the [0,0,1,...] check needs n >= 3");
  Report r;
  r.suite = "001N";
  for (auto N : moduli) {
    const AbelianGroup g = AbelianGroup::cyclic(N);
    const auto group = source(g, n, Variant::B);
    const auto order = class_order(zero_zero_one_class(*group));
    std::ostringstream name;
    name << "[0,0,1,...] in B_" << n << "(Z/" << N << ")";
    if (is_prime(N)) {
      bool ok;
      std::string expectation;
      if (N <= 5) {
        ok = order && *order == 1;
        expectation = "expected 1";
      } else {
        const Integer bound = Integer(static_cast<long>(N * N - 1)) / 24;
        ok = order && detail::divides(*order, bound);
        expectation = "expected divisor of " + bound.get_str();
      }
      r.add(name.str() + " order", ok, "order " + order_to_string(order) + ", " + expectation);
    } else {
      r.add(name.str() + " torsion", order.has_value(), "order " + order_to_string(order));
    }
    bool all_torsion = true;
    std::string witness;
    for (const auto& s : group->symbols()) {
      if (count_zero_entries(g, s) < 2) continue;
      if (!class_order(group->class_of(SymbolExpression(s)))) {
        all_torsion = false;
        witness = symbol_to_string(g, s);
        break;
      }
    }
    std::ostringstream all;
    all << "every [0,0,...] symbol torsion in B_" << n << "(Z/" << N << ")";
    r.add(all.str(), all_torsion, all_torsion ? "" : "infinite order: " + witness);
  }
  return r;
}

struct GroupDimension {
  AbelianGroup group;
  std::size_t n;
};

/// {Z/N : 2 <= N <= max_n2} in dimension 2, and {Z/N : 2 <= N <= max_n3,
/// Z/2 x Z/2, Z/2 x Z/4} in dimension 3.
inline std::vector<GroupDimension> comparison_battery(std::int64_t max_n2, std::int64_t max_n3, std::size_t max_dim) {
  std::vector<GroupDimension> out;
  if (max_dim >= 2)
    for (std::int64_t N = 2; N <= max_n2; ++N) out.push_back({AbelianGroup::cyclic(N), 2});
  if (max_dim >= 3) {
    for (std::int64_t N = 2; N <= max_n3; ++N) out.push_back({AbelianGroup::cyclic(N), 3});
    out.push_back({AbelianGroup({2, 2}), 3});
    out.push_back({AbelianGroup({2, 4}), 3});
  }
  return out;
}

inline std::string describe(const MuComparison& c) {
  std::ostringstream s;
  s << "rank " << c.rank_source << " -> " << c.rank_target << ", induced rank " << c.mu_rank_over_q;
  return s.str();
}

inline Report verify_compare(const std::vector<GroupDimension>& battery, const GroupSource& source) {
  Report r;
  r.suite = "compare";
  for (const auto& [g, n] : battery) {
    const auto cmp = rank_compare(g, n, source);
    const std::string where = "_" + std::to_string(n) + "(" + g.to_string() + ")";
    r.add("mu: B" + where + " -> M" + where + " iso over Q", cmp.mu.iso_over_q, describe(cmp.mu));
    if (cmp.mu_minus) {
      r.add("mu-: B-" + where + " -> M-" + where + " iso over Q", cmp.mu_minus->iso_over_q, describe(*cmp.mu_minus));
    }
  }
  return r;
}

inline Report verify_mu(const std::vector<GroupDimension>& battery, const GroupSource& source) {
  Report r;
  r.suite = "mu";
  for (const auto& [g, n] : battery) {
    r.add("mu descends to relations for n=" + std::to_string(n) + ", G=" + g.to_string(),
          verify_mu_descends(g, n, source));
  }
  return r;
}

}  // namespace ebt
