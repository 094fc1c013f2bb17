#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ebt/birational.hpp"
#include "ebt/hecke.hpp"
#include "ebt/parse.hpp"
#include "ebt/psi.hpp"
#include "ebt/serialization.hpp"
#include "ebt/verify.hpp"

namespace ebt::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

struct Outcome {
  int code = kOk;
  std::string out;
  std::string err;
};

/// Output record of one command: a flat JSON object, plus the check list for
/// verification suites.
struct Result {
  Json body;
  const Report* report = nullptr;
  bool failed = false;
};

inline Json integer_json(const Integer& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

inline Json integers_json(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(integer_json(x));
  return a;
}

inline Json order_json(const std::optional<Integer>& order) {
  return order ? integer_json(*order) : Json("infinite");
}

/// Nonzero generator coordinates keyed by symbol label, in generator order.
inline Json coords_json(const BirationalGroup& group, const IntVector& coords) {
  Json o = Json::object();
  const auto labels = group.labels();
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (sgn(coords[i]) != 0) o[labels[i]] = integer_json(coords[i]);
  return o;
}

inline Json class_json(const BirationalGroup& group, const GroupElementClass& x) {
  return Json{{"coords", coords_json(group, x.coords())},
              {"reduced_coords", integers_json(x.reduced())},
              {"order", order_json(class_order(x))}};
}

inline Json report_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return checks;
}

/// Triple literal {basis: [[...]], denominator: d, chi: [[...]...], cone: [[...]...]};
/// `basis` lists the basis vectors, characters may be bare integers for cyclic G.
inline LatticeTriple parse_triple(const std::string& text, const AbelianGroup& g) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("malformed triple JSON: " + std::string(e.what()), e.byte > 0 ? e.byte - 1 : 0);
  }
  try {
    const auto basis = j.at("basis").get<std::vector<std::vector<long>>>();
    const std::size_t n = basis.size();
    if (n == 0) throw Error("triple basis is empty");
    IntMatrix m(n, n);
    for (std::size_t c = 0; c < n; ++c) {
      if (basis[c].size() != n) throw Error("triple basis vectors must have length " + std::to_string(n));
      for (std::size_t r = 0; r < n; ++r) m(r, c) = basis[c][r];
    }
    const long den = j.value("denominator", 1L);
    std::vector<Character> chi;
    for (const auto& c : j.at("chi")) {
      Character ch;
      if (c.is_number_integer()) {
        ch.coords = {c.get<std::int64_t>()};
      } else {
        ch.coords = c.get<std::vector<std::int64_t>>();
      }
      if (g.is_trivial()) ch.coords.clear();
      g.check_arity(ch);
      chi.push_back(g.reduce(ch));
    }
    std::vector<IntVector> gens;
    for (const auto& v : j.at("cone")) {
      IntVector x;
      for (long e : v.get<std::vector<long>>()) x.push_back(Integer(e));
      if (x.size() != n) throw Error("cone generators must have length " + std::to_string(n));
      gens.push_back(std::move(x));
    }
    return {Lattice(std::move(m), Integer(den)), ChiVector{std::move(chi)}, Cone(std::move(gens))};
  } catch (const Json::exception& e) {
    throw Error("invalid triple: " + std::string(e.what()));
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

inline std::string render(const Result& r, const std::string& format) {
  std::ostringstream s;
  if (format == "json") {
    Json body = r.body;
    if (r.report) body["checks"] = report_json(*r.report);
    s << body.dump(2) << "\n";
  } else if (format == "csv") {
    if (r.report) {
      s << "name,passed,detail\n";
      for (const auto& c : r.report->checks)
        s << csv_field(c.name) << "," << (c.passed ? "true" : "false") << "," << csv_field(c.detail) << "\n";
    } else {
      s << "field,value\n";
      for (const auto& [k, v] : r.body.items()) s << csv_field(k) << "," << csv_field(scalar_text(v)) << "\n";
    }
  } else {
    std::size_t width = 0;
    for (const auto& [k, v] : r.body.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : r.body.items()) {
      if (k == "schema") continue;
      s << k << std::string(width - k.size() + 2, ' ') << scalar_text(v) << "\n";
    }
    if (r.report) {
      for (const auto& c : r.report->checks) {
        s << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.detail.empty()) s << "  [" << c.detail << "]";
        s << "\n";
      }
    }
  }
  return s.str();
}

struct Options {
  std::string format = "json";
  std::string cache_dir;
  bool no_cache = false;
  bool verify_cache = false;

  std::string group;
  std::size_t n = 2;
  std::string variant = "B";
  std::string expr;
  std::int64_t ell = 2;
  std::size_t r = 1;
  std::vector<std::int64_t> ells;
  std::string triple;
  std::string method = "canonical";

  std::string suite;
  std::int64_t pmax = 13;
  std::int64_t nmax_cyclic = 15;
  std::int64_t nmax_cyclic3 = 7;
  std::size_t nmax = 3;
  std::size_t samples = 40;
  bool allow_large = false;
};

/// Group source honoring --no-cache, --cache-dir, EBT_CACHE_DIR and --verify-cache.
class Sources {
 public:
  explicit Sources(const Options& o) {
    if (o.no_cache) return;
    std::filesystem::path dir = o.cache_dir;
    if (dir.empty()) {
      if (const char* e = std::getenv("EBT_CACHE_DIR"); e && *e) dir = e;
    }
    if (dir.empty()) dir = default_cache_dir();
    if (dir.empty()) return;
    disk_ = std::make_unique<DiskCache>(dir, o.verify_cache);
  }

  GroupSource source() {
    if (!memo_) {
      GroupSource fallback;
      if (disk_) fallback = [d = disk_.get()](const AbelianGroup& g, std::size_t n, Variant v) { return d->get(g, n, v); };
      memo_ = std::make_unique<GroupCache>(fallback);
    }
    return memo_->source();
  }

  BirationalPtr get(const AbelianGroup& g, std::size_t n, Variant v) { return source()(g, n, v); }

 private:
  std::unique_ptr<DiskCache> disk_;
  std::unique_ptr<GroupCache> memo_;
};

inline Json header(const std::string& command) { return Json{{"schema", kSchema}, {"command", command}}; }

inline Result cmd_group(const Options& o, Sources& src) {
  const AbelianGroup g = parse_group_spec(o.group);
  if (o.n < 1) throw Error("n must be at least 1");
  const Variant v = parse_variant(o.variant);
  const auto group = src.get(g, o.n, v);
  const auto& p = *group->presented();
  Json b = header("group");
  b["group"] = g.to_string();
  b["n"] = o.n;
  b["variant"] = to_string(v);
  b["rank"] = p.rank();
  b["torsion"] = integers_json(p.torsion());
  b["generators"] = p.num_generators();
  b["relations"] = p.relations().cols();
  return {b};
}

inline Result cmd_order(const Options& o, Sources& src) {
  const AbelianGroup g = parse_group_spec(o.group);
  const Variant v = parse_variant(o.variant);
  const SymbolExpression e = parse_expression(o.expr, g);
  const auto group = src.get(g, o.n, v);
  const auto x = group->class_of(e);
  Json b = header("order");
  b["group"] = g.to_string();
  b["n"] = o.n;
  b["variant"] = to_string(v);
  b["expr"] = expression_to_string(g, e);
  b["order"] = order_json(class_order(x));
  b["torsion"] = integers_json(group->presented()->torsion());
  b["rank"] = group->presented()->rank();
  b["reduced_coords"] = integers_json(x.reduced());
  return {b};
}

inline Result cmd_hecke(const Options& o, Sources& src) {
  const AbelianGroup g = parse_group_spec(o.group);
  const Variant v = parse_variant(o.variant);
  const HeckeParams p{o.ell, o.r};
  HeckeLimits limits;
  limits.allow_large = o.allow_large;
  validate(p, g, o.n, limits);
  const SymbolExpression e = parse_expression(o.expr, g);
  const auto group = src.get(g, o.n, v);
  const FaceSum faces = detail::faces_for(*group);
  const SymbolExpression image = hecke_expression(p, e, g, o.n, limits, faces);
  const auto x = group->class_of(image);
  Json b = header("hecke");
  b["group"] = g.to_string();
  b["n"] = o.n;
  b["variant"] = to_string(v);
  b["ell"] = o.ell;
  b["r"] = o.r;
  b["expr"] = expression_to_string(g, e);
  b["image"] = expression_to_string(g, image);
  b.update(class_json(*group, x));
  return {b};
}

inline Result cmd_psi(const Options& o, Sources& src) {
  const AbelianGroup g = parse_group_spec(o.group);
  const LatticeTriple t = parse_triple(o.triple, g);
  SubdivisionMethod method;
  if (o.method == "canonical") {
    method = SubdivisionMethod::Canonical;
  } else if (o.method == "stellar") {
    method = SubdivisionMethod::Stellar;
  } else {
    throw Error("unknown subdivision method '" + o.method + "' (expected canonical or stellar)");
  }
  const SymbolExpression e = psi_tilde_expression(t, g, method);
  const std::size_t n = t.lattice.dimension();
  const auto group = src.get(g, n, Variant::B);
  Json b = header("psi");
  b["group"] = g.to_string();
  b["n"] = n;
  b["method"] = o.method;
  b["expression"] = expression_to_string(g, e);
  b.update(class_json(*group, group->class_of(e)));
  return {b};
}

inline std::vector<std::int64_t> with_composites(std::vector<std::int64_t> primes, std::int64_t nmax) {
  for (std::int64_t N = 4; N <= nmax; ++N)
    if (!is_prime(N)) primes.push_back(N);
  return primes;
}

/// Primes up to 7 not dividing |G|.
inline std::vector<std::int64_t> default_ells(const AbelianGroup& g) {
  std::vector<std::int64_t> out;
  for (auto p : primes_up_to(7))
    if (g.order() % p != 0) out.push_back(p);
  return out;
}

struct SuiteBounds {
  bool pmax = false, nmax_cyclic = false, nmax = false, group = false, n = false, ells = false;
};

inline Result cmd_verify(const Options& o, const SuiteBounds& given, Sources& src, Report& report) {
  const GroupSource source = src.source();
  const std::string& suite = o.suite;
  report.suite = suite;
  Json b = header("verify");
  b["suite"] = suite;
  if (suite == "pn") {
    const std::int64_t pmax = o.pmax, nmax = given.nmax_cyclic ? o.nmax_cyclic : 12;
    report.append(verify_theorem_pn(with_composites(primes_up_to(pmax), nmax), 2, source));
    b["pmax"] = pmax;
    b["Nmax"] = nmax;
  } else if (suite == "001N") {
    const std::int64_t pmax = given.pmax ? o.pmax : 7, nmax = given.nmax_cyclic ? o.nmax_cyclic : 9;
    const std::size_t n = given.n ? o.n : 3;
    std::vector<std::int64_t> moduli = primes_up_to(pmax);
    for (std::int64_t N : {4, 6, 9})
      if (N <= nmax) moduli.push_back(N);
    report.append(verify_theorem_001N(moduli, n, source));
    b["pmax"] = pmax;
    b["Nmax"] = nmax;
    b["n"] = n;
  } else if (suite == "lemmas") {
    for (auto p : primes_up_to(o.pmax)) report.append(verify_lemma_suite(p, source));
    b["pmax"] = o.pmax;
  } else if (suite == "compare" || suite == "mu") {
    const std::size_t nmax = given.nmax ? o.nmax : 3;
    const auto battery = comparison_battery(o.nmax_cyclic, std::min(o.nmax_cyclic, o.nmax_cyclic3), nmax);
    report.append(suite == "compare" ? verify_compare(battery, source) : verify_mu(battery, source));
    b["Nmax"] = o.nmax_cyclic;
    b["nmax"] = nmax;
  } else if (suite == "subdivision") {
    std::vector<GroupDimension> targets;
    if (given.group) {
      targets.push_back({parse_group_spec(o.group), o.n});
    } else {
      const std::int64_t pmax = given.pmax ? o.pmax : 7;
      for (auto p : primes_up_to(pmax)) targets.push_back({AbelianGroup::cyclic(p), 2});
      if ((given.nmax ? o.nmax : 3) >= 3) targets.push_back({AbelianGroup::cyclic(5), 3});
      b["pmax"] = pmax;
    }
    for (const auto& [g, n] : targets) report.append(verify_subdivision_relations(g, n, o.samples, source));
    b["samples"] = o.samples;
  } else if (suite == "hecke") {
    HeckeLimits limits;
    limits.allow_large = o.allow_large;
    std::vector<std::pair<AbelianGroup, std::vector<std::int64_t>>> targets;
    if (given.group) {
      const AbelianGroup g = parse_group_spec(o.group);
      targets.push_back({g, given.ells ? o.ells : default_ells(g)});
    } else {
      targets = {{AbelianGroup::cyclic(3), {2, 5}}, {AbelianGroup::cyclic(5), {2, 3}}, {AbelianGroup::cyclic(7), {2, 5}}};
    }
    const std::size_t n = given.n ? o.n : 2;
    for (const auto& [g, ells] : targets) {
      for (auto ell : ells) validate({ell, o.r}, g, n, limits);
      report.append(verify_hecke(g, n, ells, o.r, source, limits));
    }
    b["n"] = n;
    b["r"] = o.r;
  } else {
    throw Error("unknown suite '" + suite + "'");
  }
  std::size_t failed = 0;
  for (const auto& c : report.checks)
    if (!c.passed) ++failed;
  b["passed"] = failed == 0;
  b["total"] = report.checks.size();
  b["failures"] = failed;
  return {b, &report, failed != 0};
}

/// Runs one command line (without the program name) and collects its output.
inline Outcome run(std::vector<std::string> args) {
  Options o;
  SuiteBounds given;
  CLI::App app{"Equivariant birational types: presentations, orders, verification suites and Hecke operators", "ebt"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table", "csv"}));
  app.add_option("--cache-dir", o.cache_dir, "presentation cache directory (env EBT_CACHE_DIR)");
  app.add_flag("--no-cache", o.no_cache, "do not read or write the presentation cache");
  app.add_flag("--verify-cache", o.verify_cache, "recompute every cache hit and require an exact match");

  const auto variants = CLI::IsMember({"B", "M", "B-", "M-", "Bminus", "Mminus"});
  auto* group = app.add_subcommand("group", "structure of a presented group");
  auto* order = app.add_subcommand("order", "order of the class of a symbol expression");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* hecke = app.add_subcommand("hecke", "apply a Hecke operator T_{ell,r}");
  auto* psi = app.add_subcommand("psi", "evaluate psi-tilde on a lattice triple");
  for (auto* sub : {group, order, verify, hecke, psi}) sub->fallthrough();

  for (auto* sub : {group, order, hecke}) {
    sub->add_option("--group", o.group, "group spec, e.g. \"Z/4 x Z/2\"")->required();
    sub->add_option("--n", o.n, "dimension")->check(CLI::PositiveNumber);
  }
  for (auto* sub : {group, order}) sub->add_option("--variant", o.variant, "B, M, B- or M-")->check(variants);
  hecke->add_option("--variant", o.variant, "B (all faces) or M (maximal cones)")->check(CLI::IsMember({"B", "M"}));
  for (auto* sub : {order, hecke}) sub->add_option("--expr", o.expr, "symbol expression, e.g. \"[1,0] + [-1,0]\"")->required();
  hecke->add_option("--ell", o.ell, "prime not dividing |G|");
  hecke->add_option("--r", o.r, "rank of the quotient, 1 <= r <= n-1");
  hecke->add_flag("--allow-large", o.allow_large, "lift the n <= 3, ell <= 7 scale guard");

  psi->add_option("--group", o.group, "group spec")->required();
  psi->add_option("--triple", o.triple, "triple literal {basis, denominator, chi, cone}")->required();
  psi->add_option("--method", o.method, "canonical or stellar")->check(CLI::IsMember({"canonical", "stellar"}));

  verify->add_option("--suite", o.suite, "suite")
      ->required()
      ->check(CLI::IsMember({"pn", "001N", "lemmas", "compare", "mu", "subdivision", "hecke"}));
  auto* pmax = verify->add_option("--pmax", o.pmax, "largest prime modulus")->check(CLI::Range(2, 23));
  auto* nmax_cyclic = verify->add_option("--Nmax", o.nmax_cyclic, "largest cyclic order")->check(CLI::Range(2, 40));
  verify->add_option("--N3max", o.nmax_cyclic3, "largest cyclic order in dimension 3")->check(CLI::Range(2, 12));
  auto* nmax = verify->add_option("--nmax", o.nmax, "largest dimension")->check(CLI::Range(2, 3));
  auto* vgroup = verify->add_option("--group", o.group, "restrict subdivision or hecke to one group");
  auto* vn = verify->add_option("--n", o.n, "dimension for subdivision, hecke or 001N")->check(CLI::Range(2, 4));
  auto* vells = verify->add_option("--ell", o.ells, "primes for the hecke suite");
  verify->add_option("--r", o.r, "r for the hecke suite");
  verify->add_option("--samples", o.samples, "random relation instances per check");
  verify->add_flag("--allow-large", o.allow_large, "lift scale guards");

  std::ostringstream out, err;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {code == 0 ? kOk : kUsage, out.str(), err.str()};
  }
  given = {pmax->count() > 0, nmax_cyclic->count() > 0, nmax->count() > 0,
           vgroup->count() > 0, vn->count() > 0,         vells->count() > 0};

  try {
    Sources src(o);
    Report report;
    Result result;
    if (*group) result = cmd_group(o, src);
    if (*order) result = cmd_order(o, src);
    if (*hecke) result = cmd_hecke(o, src);
    if (*psi) result = cmd_psi(o, src);
    if (*verify) result = cmd_verify(o, given, src, report);
    return {result.failed ? kFailed : kOk, render(result, o.format), ""};
  } catch (const Error& e) {
    return {kUsage, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kUsage, "", std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace ebt::cli
