#include "bneg/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "bneg/error.hpp"
#include "bneg/fermat.hpp"
#include "bneg/geometry.hpp"
#include "bneg/poly.hpp"
#include "bneg/surface.hpp"

#ifndef BNEG_VERSION
#define BNEG_VERSION "0.0.0"
#endif

namespace bneg::report {

using geometry::ProjPoint;
using nlohmann::json;

std::string version() { return BNEG_VERSION; }

json Budgets::to_json() const {
  return {{"quadratic_q", quadratic_q}, {"linear_q", linear_q}, {"max_d", max_d}};
}

Budgets Budgets::from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("budgets must be an object");
  Budgets b;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
      throw ParameterError("budget '" + key + "' must be a positive integer");
    }
    if (key == "quadratic_q") {
      b.quadratic_q = value.get<std::uint64_t>();
    } else if (key == "linear_q") {
      b.linear_q = value.get<std::uint64_t>();
    } else if (key == "max_d") {
      b.max_d = value.get<unsigned>();
    } else {
      throw ParameterError("unknown budget '" + key + "'");
    }
  }
  return b;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{
      "field",          "equation",     "multiplicities",       "self_intersection", "rationality",
      "singular_locus", "galois_intersection", "lift",          "blowup_model",      "psi",
      "graph_correspondence", "rel_frobenius", "fermat_count",  "zeta_fermat",       "shioda_katsura",
      "gamma_relation", "log_invariants"};
  return names;
}

bool fault_supported(const std::string& name) {
  if (name == "mult") return true;
  if (name == "shioda_katsura") return false;
  const auto& n = check_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.informational || c.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.check == name) return &c;
  }
  return nullptr;
}

json VerificationReport::to_json() const {
  json j;
  j["schema"] = kSchema;
  j["version"] = version_string;
  j["params"] = {{"p", p}, {"m", m}, {"e", e}, {"q", q}, {"d", d}};
  json cs = json::array();
  json failed = json::array();
  json info = json::array();
  for (const auto& c : checks) {
    cs.push_back(c.to_json());
    if (c.informational) {
      info.push_back(c.check);
    } else if (!c.pass) {
      failed.push_back(c.check);
    }
  }
  j["checks"] = cs;
  json summary{{"pass", passed()}, {"failed", failed}, {"informational", info}};
  if (const auto* si = find("self_intersection")) {
    summary["self_intersection"] = si->detail.value("self_intersection", json(nullptr));
    summary["expected_self_intersection"] = si->detail.value("expected", json(nullptr));
  }
  j["summary"] = summary;
  if (!timings.empty()) {
    json t = json::object();
    for (std::size_t k = 0; k < checks.size() && k < timings.size(); ++k) t[checks[k].check] = timings[k];
    j["timings_ms"] = t;
  }
  return j;
}

VerificationReport VerificationReport::from_json(const json& j) {
  try {
    if (j.at("schema").get<int>() != kSchema) throw ParameterError("unsupported report schema");
    VerificationReport r;
    r.version_string = j.at("version").get<std::string>();
    const auto& prm = j.at("params");
    r.p = prm.at("p").get<std::uint64_t>();
    r.m = prm.at("m").get<unsigned>();
    r.e = prm.at("e").get<unsigned>();
    r.q = prm.at("q").get<std::uint64_t>();
    r.d = prm.at("d").get<std::uint64_t>();
    if (r.m == 0 || r.e == 0 || ff::checked_pow(r.p, r.e) != r.q || r.d * r.m != r.q - 1) {
      throw ParameterError("report parameters violate d m = p^e - 1");
    }
    std::set<std::string> seen;
    for (const auto& c : j.at("checks")) {
      CheckRecord rec(c.at("check").get<std::string>(), c.at("params"));
      rec.pass = c.at("pass").get<bool>();
      rec.informational = c.value("informational", false);
      rec.witness = c.at("witness");
      rec.skipped = c.at("skipped").get<std::uint64_t>();
      rec.detail = c.value("detail", json::object());
      if (!seen.insert(rec.check).second) throw ParameterError("check '" + rec.check + "' listed twice");
      r.checks.push_back(std::move(rec));
    }
    for (const auto& name : check_names()) {
      if (!seen.count(name)) throw ParameterError("check '" + name + "' missing from report");
    }
    if (seen.size() != check_names().size()) throw ParameterError("report lists unknown checks");
    if (j.contains("timings_ms")) {
      for (const auto& c : r.checks) r.timings.push_back(j["timings_ms"].value(c.check, 0.0));
    }
    return r;
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("malformed report: ") + ex.what());
  }
}

namespace {

// Largest k | e with p^k <= 32, or 0 when p itself is too large.
unsigned sample_degree(std::uint64_t p, unsigned e) {
  unsigned best = 0;
  for (unsigned k = 1; k <= e; ++k) {
    if (e % k != 0) continue;
    if (ff::checked_pow(p, k) > surface::kDefaultSampleBound) break;
    best = k;
  }
  return best;
}

CheckRecord not_applicable(const std::string& name, json params, const std::string& why) {
  CheckRecord rec(name, std::move(params));
  rec.detail = {{"status", "not_applicable"}, {"reason", why}};
  return rec;
}

json pts_json(const std::vector<ProjPoint>& v) {
  json a = json::array();
  for (const auto& P : v) a.push_back(P.to_string());
  return a;
}

}  // namespace

VerificationReport run_verify(std::uint64_t p, unsigned m, unsigned e, const Budgets& budgets,
                              const std::optional<std::string>& fault_name, bool timings) {
  std::optional<std::string> fault = fault_name;
  if (fault && *fault == "mult") fault = "multiplicities";
  if (fault && !fault_supported(*fault)) throw ParameterError("no fault hook named '" + *fault + "'");
  auto faulted = [&](const char* name) { return fault && *fault == name; };

  const auto t = geometry::make_triple(p, m, e);
  if (t.q > budgets.quadratic_q) {
    throw ResourceError("q = " + std::to_string(t.q) + " exceeds the quadratic budget " +
                        std::to_string(budgets.quadratic_q));
  }
  if (t.d > budgets.max_d) {
    throw ResourceError("d = " + std::to_string(t.d) + " exceeds the degree budget " + std::to_string(budgets.max_d));
  }
  const auto& K = *t.field;
  const json tp = t.to_json();

  VerificationReport r;
  r.p = t.p;
  r.m = t.m;
  r.e = t.e;
  r.q = t.q;
  r.d = t.d;
  r.version_string = version();

  auto timed = [&](std::function<CheckRecord()> run) {
    const auto start = std::chrono::steady_clock::now();
    r.checks.push_back(run());
    if (timings) {
      const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
      r.timings.push_back(dt.count());
    }
  };

  timed([&] {
    CheckRecord rec("field", tp);
    std::uint64_t n = 0, round_trip = 0;
    std::set<ff::Code> seen;
    for (const auto& x : ff::enumerate_field(t.field, budgets.linear_q)) {
      if (faulted("field") && n == 0) {
        ++n;
        continue;
      }
      seen.insert(x.code());
      if (K.from_digits(K.digits(x.code())) == x.code() && K.frobenius(x.code(), t.e) == x.code()) ++round_trip;
      ++n;
    }
    if (seen.size() != t.q || round_trip != seen.size()) {
      rec.fail({{"expected", t.q}, {"enumerated", seen.size()}, {"consistent", round_trip}});
    }
    const auto g = K.generator();
    if (K.order(g) != t.q - 1) rec.fail({{"generator", g}, {"order", K.order(g)}});
    const auto z = K.root_of_unity(t.m);
    if (K.order(z) != t.m) rec.fail({{"root_of_unity", z}, {"order", K.order(z)}});
    rec.detail = {{"field", K.name()}, {"modulus", K.modulus()}, {"generator", g}, {"root_of_unity", z}};
    return rec;
  });

  const auto f_d = poly::norm_product(static_cast<unsigned>(t.d), t.field, budgets.max_d);

  timed([&] {
    CheckRecord rec("equation", tp);
    auto f = f_d;
    if (faulted("equation")) f.add_term({{static_cast<unsigned>(t.d), 0, 0}}, 1);
    std::uint64_t n = 0;
    for (const auto& P : geometry::enumerate_C1(t.field, budgets.linear_q)) {
      const auto img = geometry::apply_param({t.d, {1, 1, 1}}, P);
      ++n;
      if (poly::evaluate(f, K, img.codes()) != 0) {
        rec.fail({{"point", P.to_string()}, {"image", img.to_string()}, {"reason", "f_d does not vanish"}});
      }
    }
    rec.detail = {{"degree", t.d}, {"terms", f.size()}, {"points", n}};
    // d + 1 a power of p: compare with the complete homogeneous polynomial
    std::uint64_t pk = 1;
    while (pk <= t.d) pk *= t.p;
    if (pk == t.d + 1) {
      const auto fp = ff::field_create(t.p, 1);
      const auto g = poly::reduce(poly::complete_homogeneous(static_cast<unsigned>(t.d), poly::IntegerRing{}), fp);
      const bool same = poly::equal_up_to_scalar(f, g);
      rec.detail["g_comparison"] = same;
      if (!same) rec.fail({{"reason", "f_d is not a multiple of g_d"}, {"degree", t.d}});
    } else {
      rec.detail["g_comparison"] = nullptr;
    }
    return rec;
  });

  const auto taylor_clean = geometry::multiplicity_profile_taylor(t, f_d);
  auto taylor = taylor_clean;
  if (faulted("multiplicities") || faulted("self_intersection") || faulted("rationality")) {
    // +2 at the largest entry moves every sum, including sum m(m-1)
    *std::max_element(taylor.mults.begin(), taylor.mults.end()) += 2;
  }
  const auto preimage = geometry::multiplicity_profile_preimage(t, budgets.linear_q);
  auto singular = geometry::rational_singular_points(f_d, t.field, budgets.quadratic_q);
  if (faulted("singular_locus")) singular.push_back(ProjPoint(t.field, 1, 0, 0));
  const auto mt = geometry::check_main_theorem(t, taylor, preimage, singular);
  const auto z = geometry::z_points(t.m, t.field);

  timed([&] {
    CheckRecord rec("multiplicities", tp);
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (mt.taylor.mults[k] != mt.preimage.mults[k]) {
        rec.fail({{"point", z[k].to_string()}, {"taylor", mt.taylor.mults[k]}, {"preimage", mt.preimage.mults[k]}});
      }
    }
    if (!mt.sums_ok) {
      rec.fail({{"sum", mt.taylor.sum()},
                {"sum_squares", mt.taylor.sum_squares()},
                {"expected_sum", t.d * t.m - 1},
                {"expected_sum_squares", t.d * t.d + t.d * t.m + 1 - 3 * t.d}});
    }
    rec.detail = {{"taylor", mt.taylor.to_json()}, {"preimage", mt.preimage.to_json()},
                  {"sum", mt.taylor.sum()}, {"sum_squares", mt.taylor.sum_squares()}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("self_intersection", tp);
    const auto adj = surface::adjunction_self_intersection(t.m, t.d);
    if (!mt.lattice_ok || mt.self_intersection != adj) {
      rec.fail({{"self_intersection", mt.self_intersection}, {"expected", mt.expected}, {"adjunction", adj}});
    }
    rec.detail = {{"self_intersection", mt.self_intersection}, {"expected", mt.expected}, {"adjunction", adj}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("rationality", tp);
    std::uint64_t delta = 0;
    for (auto v : mt.taylor.mults) delta += v * (v == 0 ? 0 : v - 1);
    const std::uint64_t want = (t.d - 1) * (t.d == 1 ? 0 : t.d - 2);
    if (!mt.rational_ok) rec.fail({{"sum_m_m_minus_1", delta}, {"expected", want}});
    rec.detail = {{"sum_m_m_minus_1", delta}, {"expected", want}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("singular_locus", tp);
    if (!mt.singular_ok) rec.fail({{"point", mt.stray_singular_points.front().to_string()}, {"reason", "outside Z_m"}});
    rec.detail = {{"singular_points", pts_json(mt.singular_points)}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("galois_intersection", tp);
    const auto table = geometry::galois_table(t, mt.self_intersection + (faulted("galois_intersection") ? 1 : 0));
    for (const auto& row : table.rows) {
      if (!row.ok()) {
        rec.fail({{"twist", row.twist}, {"predicted", row.predicted}, {"enumerated", row.enumerated}});
      }
    }
    const std::int64_t want = static_cast<std::int64_t>(2 * t.d * t.m) - 1;
    if (table.decomposition_sum != want) {
      rec.fail({{"decomposition_sum", table.decomposition_sum}, {"expected", want}});
    }
    std::uint64_t nonzero = 0;
    for (const auto& row : table.rows) nonzero += row.predicted != 0;
    rec.detail = {{"twists", table.rows.size()}, {"nonzero", nonzero},
                  {"decomposition_sum", table.decomposition_sum}, {"expected_sum", want}};
    return rec;
  });

  timed([&] {
    auto rec = surface::verify_lift(t.p, t.m, t.e, budgets.quadratic_q, faulted("lift"));
    const auto w = surface::lift_witness(t.p, t.m, t.e, t.d + 1, budgets.quadratic_q);
    rec.detail["exponent_d_plus_1_witness"] = w ? json(w->to_string()) : json(nullptr);
    return rec;
  });

  const unsigned k = sample_degree(t.p, t.e);
  const auto sample = k == 0 ? nullptr : ff::field_create(t.p, k);

  timed([&] {
    if (!sample) return not_applicable("blowup_model", tp, "p exceeds the sample bound");
    return surface::verify_blowup_model(t.m, sample, surface::kDefaultSampleBound, faulted("blowup_model"));
  });

  timed([&] {
    if (!sample) return not_applicable("psi", tp, "p exceeds the sample bound");
    CheckRecord rec("psi", tp);
    const auto a = surface::verify_psi(t.m, t.m, t.m, -1, sample, surface::kDefaultSampleBound, faulted("psi"));
    const auto b = surface::verify_psi(t.m, 1, t.q, -static_cast<std::int64_t>(t.d), sample,
                                       surface::kDefaultSampleBound, faulted("psi"));
    json sets = json::array();
    for (const auto* s : {&a, &b}) {
      if (!s->pass) rec.fail({{"params", s->params}, {"witness", s->witness}});
      rec.skipped += s->skipped;
      sets.push_back({{"params", s->params}, {"pass", s->pass}, {"skipped", s->skipped}, {"detail", s->detail}});
    }
    rec.detail = {{"sets", sets}};
    return rec;
  });

  timed([&] {
    return surface::verify_graph_correspondence(t.p, t.m, t.e, budgets.linear_q, faulted("graph_correspondence"));
  });

  timed([&] { return surface::verify_rel_frobenius(t.p, t.m, t.e, budgets.linear_q, faulted("rel_frobenius")); });

  const auto tally = fermat::count_points_tally(t.m, t.field, budgets.linear_q);

  timed([&] {
    CheckRecord rec("fermat_count", tp);
    const auto naive = fermat::count_points_naive(t.m, t.field, budgets.quadratic_q);
    const std::uint64_t tc = tally.count + (faulted("fermat_count") ? 1 : 0);
    if (naive.count != tc) rec.fail({{"naive", naive.count}, {"tally", tc}});
    if (!fermat::hasse_weil_ok(t.m, t.q, tc)) rec.fail({{"count", tc}, {"reason", "outside the Hasse-Weil window"}});
    rec.detail = {{"naive", naive.count}, {"tally", tc}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("zeta_fermat", tp);
    const std::uint64_t count = tally.count + (faulted("zeta_fermat") ? 1 : 0);
    const auto axis = fermat::count_axis_points(t.m, t.field);
    const auto idx = geometry::z_index(t.m, ProjPoint(t.field, 1, 1, 1));
    const auto geometric = taylor_clean.mults.at(*idx);
    const std::uint64_t m2 = static_cast<std::uint64_t>(t.m) * t.m;
    const bool divisible = count >= axis && (count - axis) % m2 == 0;
    if (!divisible || (count - axis) / m2 != geometric) {
      rec.fail({{"count", count}, {"axis_points", axis}, {"geometric", geometric}});
    }
    const auto literal = static_cast<std::int64_t>(count) - 3 * static_cast<std::int64_t>(t.m);
    const bool literal_ok = literal >= 0 && literal % static_cast<std::int64_t>(m2) == 0;
    rec.detail = {{"count", count},
                  {"axis_points", axis},
                  {"geometric", geometric},
                  {"from_count", divisible ? json((count - axis) / m2) : json(nullptr)},
                  {"three_m_formula", {{"numerator", literal},
                                       {"denominator", m2},
                                       {"value", literal_ok ? json(literal / static_cast<std::int64_t>(m2))
                                                            : json(nullptr)}}},
                  {"three_m_formula_applies", axis == 3 * static_cast<std::uint64_t>(t.m)}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("shioda_katsura", tp);
    rec.informational = true;
    rec.detail = fermat::shioda_katsura_check(t.m, t.p, t.e, budgets.linear_q).to_json();
    return rec;
  });

  timed([&] {
    CheckRecord rec("gamma_relation", tp);
    auto g = surface::gamma_relation(t.m, t.p, t.e);
    if (faulted("gamma_relation")) g.lhs += 1;
    const auto lattice = static_cast<std::int64_t>(t.m) * t.m * mt.self_intersection;
    if (!g.holds()) rec.fail({{"lhs", g.lhs}, {"rhs", g.rhs}});
    if (g.lhs != lattice) rec.fail({{"lhs", g.lhs}, {"m2_self_intersection", lattice}});
    rec.detail = {{"lhs", g.lhs}, {"rhs", g.rhs}, {"genus", g.genus}};
    return rec;
  });

  timed([&] {
    CheckRecord rec("log_invariants", tp);
    const auto v = surface::log_invariants(t.m, t.d);
    const auto mm = static_cast<std::int64_t>(t.m);
    const std::int64_t K2 = 9 - mm * mm;
    const std::int64_t KC = static_cast<std::int64_t>(t.d) * (mm - 3) - 1 + (faulted("log_invariants") ? 1 : 0);
    const std::int64_t C2 = mt.self_intersection;
    if (K2 + 2 * KC + C2 != v.c1sq) rec.fail({{"K2_2KC_C2", K2 + 2 * KC + C2}, {"c1sq", v.c1sq}});
    if (3 + mm * mm + KC + C2 != v.c2) rec.fail({{"euler_route", 3 + mm * mm + KC + C2}, {"c2", v.c2}});
    if (!v.consistent()) rec.fail({{"reason", "slope test and threshold disagree"}, {"m", t.m}, {"d", t.d}});
    rec.detail = v.to_json();
    return rec;
  });

  return r;
}

SurveyConfig SurveyConfig::from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key != "grid" && key != "budgets" && key != "threads") throw ParameterError("unknown config key '" + key + "'");
    }
    SurveyConfig c;
    const auto& g = j.at("grid");
    for (const auto& pv : g.at("p")) {
      const auto p = pv.get<std::uint64_t>();
      if (!ff::is_prime(p)) throw ParameterError(std::to_string(p) + " is not prime");
      c.primes.push_back(p);
    }
    const auto& mv = g.at("m");
    if (mv.is_array()) {
      for (const auto& x : mv) c.ms.push_back(x.get<unsigned>());
    } else {
      const auto lo = mv.at("min").get<unsigned>();
      const auto hi = mv.at("max").get<unsigned>();
      for (unsigned m = lo; m <= hi; ++m) c.ms.push_back(m);
    }
    if (std::find(c.ms.begin(), c.ms.end(), 0u) != c.ms.end()) throw ParameterError("m must be positive");
    c.max_q = g.at("max_q").get<std::uint64_t>();
    if (j.contains("budgets")) c.budgets = Budgets::from_json(j["budgets"]);
    c.threads = j.value("threads", 0u);
    std::sort(c.primes.begin(), c.primes.end());
    c.primes.erase(std::unique(c.primes.begin(), c.primes.end()), c.primes.end());
    std::sort(c.ms.begin(), c.ms.end());
    c.ms.erase(std::unique(c.ms.begin(), c.ms.end()), c.ms.end());
    return c;
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("malformed config: ") + ex.what());
  }
}

bool SurveyResult::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const SurveyRow& r) { return r.values.at("pass").get<bool>(); });
}

json SurveyResult::to_json() const {
  json rs = json::array();
  for (const auto& r : rows) {
    json row{{"p", r.p}, {"m", r.m}, {"e", r.e}, {"q", r.q}, {"d", r.d}};
    row.update(r.values);
    rs.push_back(row);
  }
  json sk = json::array();
  for (const auto& s : skipped) sk.push_back({{"p", s.p}, {"m", s.m}, {"e", s.e}, {"reason", s.reason}});
  return {{"schema", kSchema},
          {"version", version()},
          {"rows", rs},
          {"skipped", sk},
          {"summary", {{"rows", rows.size()}, {"skipped", skipped.size()}, {"pass", passed()}}}};
}

namespace {

const std::vector<std::string> kScalarColumns{"self_intersection", "expected", "c1sq", "c2", "slope",
                                              "chi2K", "slope_exceeds_4", "pseff_threshold_met", "pass"};

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

std::string SurveyResult::to_csv() const {
  std::ostringstream out;
  out << "p,m,e,q,d";
  for (const auto& c : kScalarColumns) out << ',' << c;
  for (const auto& c : check_names()) out << ",pass_" << c;
  out << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << r.m << ',' << r.e << ',' << r.q << ',' << r.d;
    for (const auto& c : kScalarColumns) out << ',' << cell(r.values.at(c));
    for (const auto& c : check_names()) out << ',' << cell(r.values.at("checks").at(c));
    out << '\n';
  }
  return out.str();
}

std::string SurveyResult::to_text() const {
  std::ostringstream out;
  out << "p\tm\te\tq\td\tC~^2\tslope\tslope>4\tpass\n";
  for (const auto& r : rows) {
    out << r.p << '\t' << r.m << '\t' << r.e << '\t' << r.q << '\t' << r.d << '\t'
        << cell(r.values.at("self_intersection")) << '\t' << cell(r.values.at("slope")) << '\t'
        << cell(r.values.at("slope_exceeds_4")) << '\t' << (r.values.at("pass").get<bool>() ? "PASS" : "FAIL")
        << '\n';
  }
  for (const auto& s : skipped) out << "skipped " << s.p << ' ' << s.m << ' ' << s.e << ": " << s.reason << '\n';
  out << rows.size() << " rows, " << skipped.size() << " skipped, " << (passed() ? "all pass" : "FAILURES") << '\n';
  return out.str();
}

namespace {

SurveyRow make_row(const VerificationReport& rep) {
  SurveyRow row{rep.p, rep.m, rep.e, rep.q, rep.d, json::object()};
  const auto v = surface::log_invariants(rep.m, rep.d);
  const auto* si = rep.find("self_intersection");
  row.values["self_intersection"] = si->detail.at("self_intersection");
  row.values["expected"] = si->detail.at("expected");
  row.values["c1sq"] = v.c1sq;
  row.values["c2"] = v.c2;
  std::ostringstream slope;
  slope << v.slope.numerator() << '/' << v.slope.denominator();
  row.values["slope"] = slope.str();
  row.values["chi2K"] = v.chi2K;
  row.values["slope_exceeds_4"] = v.slope_exceeds_4;
  row.values["pseff_threshold_met"] = v.pseff_threshold_met;
  json checks = json::object();
  for (const auto& c : rep.checks) checks[c.check] = c.pass;
  row.values["checks"] = checks;
  row.values["pass"] = rep.passed();
  return row;
}

}  // namespace

SurveyResult run_survey(const SurveyConfig& config) {
  struct Task {
    std::uint64_t p;
    unsigned m;
    unsigned e;
  };
  using Outcome = std::variant<std::monostate, SurveyRow, SurveySkip>;
  std::vector<Task> tasks;
  std::vector<Outcome> outcomes;
  for (auto p : config.primes) {
    for (auto m : config.ms) {
      std::uint64_t q = p;
      for (unsigned e = 1; q <= config.max_q; ++e) {
        if ((q - 1) % m == 0) {
          const auto d = (q - 1) / m;
          if (d > config.budgets.max_d) {
            outcomes.emplace_back(SurveySkip{p, m, e, "d = " + std::to_string(d) + " exceeds max_d"});
          } else if (q > config.budgets.quadratic_q) {
            outcomes.emplace_back(SurveySkip{p, m, e, "q = " + std::to_string(q) + " exceeds quadratic_q"});
          } else {
            outcomes.emplace_back(std::monostate{});
            tasks.push_back({p, m, e});
          }
        }
        if (q > config.max_q / p) break;
        q *= p;
      }
    }
  }

  // outcome slot for each task, in grid order
  std::vector<std::size_t> slot;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    if (std::holds_alternative<std::monostate>(outcomes[k])) slot.push_back(k);
  }
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto& tk = tasks[k];
      try {
        outcomes[slot[k]] = make_row(run_verify(tk.p, tk.m, tk.e, config.budgets));
      } catch (const ResourceError& ex) {
        outcomes[slot[k]] = SurveySkip{tk.p, tk.m, tk.e, ex.what()};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  SurveyResult res;
  for (auto& o : outcomes) {
    if (auto* row = std::get_if<SurveyRow>(&o)) res.rows.push_back(std::move(*row));
    if (auto* s = std::get_if<SurveySkip>(&o)) res.skipped.push_back(std::move(*s));
  }
  return res;
}

}  // namespace bneg::report
