// One PASS/FAIL line per acceptance criterion. Exit status is 0 when every
// criterion passes, or, with --expect-fail k[,k...], when exactly the listed
// criteria fail.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ebt/ebt.hpp"

namespace {

using namespace ebt;

struct Verdict {
  bool passed = true;
  std::string detail;
};

std::string first_failure(const Report& r) {
  for (const auto& c : r.checks)
    if (!c.passed) return c.name + (c.detail.empty() ? "" : ": " + c.detail);
  return {};
}

Verdict from_reports(const std::vector<Report>& reports) {
  std::size_t total = 0, failed = 0;
  std::string witness;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      ++total;
      if (!c.passed) ++failed;
    }
    if (witness.empty()) witness = first_failure(r);
  }
  std::ostringstream s;
  s << (total - failed) << "/" << total << " checks";
  if (failed) s << "; first failure: " << witness;
  return {failed == 0 && total > 0, s.str()};
}

std::string orders_of(const Report& r, const std::string& suffix) {
  std::string out;
  for (const auto& c : r.checks) {
    if (c.name.size() < suffix.size() || c.name.compare(c.name.size() - suffix.size(), suffix.size(), suffix) != 0)
      continue;
    const auto open = c.name.find("(Z/");
    out += (out.empty() ? "" : ", ") + c.name.substr(open + 1, c.name.find(')', open) - open - 1) + ": " + c.detail;
  }
  return out;
}

Verdict criterion_pn_primes(const GroupSource& src) {
  const Report r = verify_theorem_pn({2, 3, 5, 7, 11, 13}, 2, src);
  Verdict v = from_reports({r});
  v.detail += "; " + orders_of(r, " order");
  return v;
}

Verdict criterion_pn_composite(const GroupSource& src) {
  return from_reports({verify_theorem_pn({4, 6, 8, 9, 10, 12}, 2, src)});
}

Verdict criterion_001N(const GroupSource& src) {
  const Report r = verify_theorem_001N({2, 3, 5, 7, 4, 6, 9}, 3, src);
  Verdict v = from_reports({r});
  v.detail += "; " + orders_of(r, " order");
  return v;
}

std::vector<GroupDimension> battery() { return comparison_battery(15, 7, 3); }

Verdict criterion_compare(const GroupSource& src) { return from_reports({verify_compare(battery(), src)}); }

Verdict criterion_lemmas(const GroupSource& src) {
  std::vector<Report> reports;
  for (auto p : primes_up_to(13)) reports.push_back(verify_lemma_suite(p, src));
  return from_reports(reports);
}

Verdict criterion_mu(const GroupSource& src) { return from_reports({verify_mu(battery(), src)}); }

Verdict criterion_cones(const GroupSource& src) {
  std::vector<Report> reports;
  for (std::int64_t p : {2, 3, 5, 7}) reports.push_back(verify_subdivision_relations(AbelianGroup::cyclic(p), 2, 200, src));
  reports.push_back(verify_subdivision_relations(AbelianGroup::cyclic(5), 3, 200, src));
  return from_reports(reports);
}

Report hecke_report(std::int64_t N, const std::vector<std::int64_t>& ells, const GroupSource& src) {
  return verify_hecke(AbelianGroup::cyclic(N), 2, ells, 1, src);
}

Report select(const Report& r, const std::string& needle) {
  Report out;
  for (const auto& c : r.checks)
    if (c.name.find(needle) != std::string::npos) out.checks.push_back(c);
  return out;
}

Verdict criterion_hecke_relations(const GroupSource& src) {
  std::vector<Report> reports;
  for (const auto& [N, ell] : std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 2}, {5, 2}, {5, 3}, {3, 5}})
    reports.push_back(select(hecke_report(N, {ell}, src), "respects all relations of B"));
  return from_reports(reports);
}

Verdict criterion_hecke_commute(const GroupSource& src) {
  std::vector<Report> reports;
  std::string integral;
  for (std::int64_t N : {3, 7}) {
    reports.push_back(select(hecke_report(N, {2, 5}, src), "commute on B (x) Q"));
    integral += " Z/" + std::to_string(N) + " {" + reports.back().checks.front().detail + "}";
  }
  Verdict v = from_reports(reports);
  v.detail += ";" + integral;
  return v;
}

Verdict criterion_smith() {
  std::mt19937 rng(20240607);
  std::uniform_int_distribution<int> dim(1, 8), entry(-20, 20), coef(-3, 3);
  std::size_t bad = 0, bad_invariance = 0;
  std::string witness;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t m = dim(rng), n = dim(rng);
    IntMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);
    const auto f = smith_normal_form(a);
    bool ok = f.U * a * f.V == f.D(n) && f.U * f.u_inverse == IntMatrix::identity(m) &&
              abs(determinant(f.U)) == 1 && abs(determinant(f.V)) == 1;
    for (std::size_t i = 0; i < f.diag.size(); ++i) {
      if (i < f.rank && sgn(f.diag[i]) <= 0) ok = false;
      if (i >= f.rank && sgn(f.diag[i]) != 0) ok = false;
      if (i + 1 < f.rank && !detail::divides(f.diag[i], f.diag[i + 1])) ok = false;
    }
    if (!ok) {
      ++bad;
      if (witness.empty()) witness = "matrix #" + std::to_string(k);
    }
    IntMatrix b = a;
    for (int s = 0; s < 12 && n > 1; ++s) {
      const std::size_t x = rng() % n, y = rng() % n;
      if (x == y) {
        b.swap_cols(x, (x + 1) % n);
      } else {
        b.add_col_multiple(x, y, Integer(coef(rng)));
      }
    }
    if (cokernel_structure(a) != cokernel_structure(b)) ++bad_invariance;
  }
  std::ostringstream s;
  s << "1000 matrices: " << bad << " identity failures, " << bad_invariance << " cokernel changes";
  if (!witness.empty()) s << "; first: " << witness;
  return {bad == 0 && bad_invariance == 0, s.str()};
}

struct Criterion {
  int id;
  std::string title;
  std::function<Verdict(const GroupSource&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) expected_failures.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--expect-fail k[,k...]]\n";
      return 2;
    }
  }

  GroupCache cache;
  const GroupSource src = cache.source();
  const std::vector<Criterion> criteria = {
      {1, "delta vanishes in B_2(Z/p) for p <= 5 and is killed by (p^2-1)/24 for p = 7, 11, 13", criterion_pn_primes},
      {2, "[a,0]+[-a,0] is torsion in B_2(Z/N) for N in {4,6,8,9,10,12}, all units a", criterion_pn_composite},
      {3, "[0,0,1] in B_3: zero for p <= 5, killed by (p^2-1)/24 for p = 7, torsion for N = 4, 6, 9", criterion_001N},
      {4, "mu and mu- are isomorphisms over Q on the comparison battery", criterion_compare},
      {5, "lemma identities in B_2(Z/p) for p <= 13", criterion_lemmas},
      {6, "mu descends to the relations on the comparison battery", criterion_mu},
      {7, "round trip, star subdivision relations and subdivision independence of psi-tilde", criterion_cones},
      {8, "T_{ell,1} annihilates every (B) relation for (Z/3,2), (Z/5,2), (Z/5,3), (Z/3,5)", criterion_hecke_relations},
      {9, "T_{2,1} and T_{5,1} commute on B_2(Z/N) (x) Q for N = 3, 7", criterion_hecke_commute},
      {10, "Smith form identities on 1000 random matrices and cokernel invariance",
       [](const GroupSource&) { return criterion_smith(); }},
  };

  std::set<int> failures;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run(src);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.passed) failures.insert(c.id);
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << secs;
    std::cout << (v.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " [" << v.detail << "] ("
              << t.str() << " s)" << std::endl;
  }
  std::cout << (criteria.size() - failures.size()) << "/" << criteria.size() << " criteria passed" << std::endl;
  if (!expected_failures.empty()) {
    const bool as_expected = failures == expected_failures;
    std::cout << (as_expected ? "failures match the expected set" : "failures differ from the expected set")
              << std::endl;
    return as_expected ? 0 : 1;
  }
  return failures.empty() ? 0 : 1;
}
