#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bneg/error.hpp"
#include "bneg/fermat.hpp"
#include "bneg/geometry.hpp"
#include "bneg/poly.hpp"
#include "bneg/report.hpp"

using namespace bneg;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

std::string pretty(const poly::FPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  const auto& terms = f.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [mono, c] = *it;
    if (!out.empty()) out += " + ";
    std::string mon;
    for (int i = 0; i < 3; ++i) {
      const unsigned k = mono.exps[i];
      if (k == 0) continue;
      if (!mon.empty()) mon += '*';
      mon += "x" + std::to_string(i);
      if (k > 1) mon += "^" + std::to_string(k);
    }
    const std::string coeff = f.ring().format(c);
    if (mon.empty()) {
      out += coeff;
    } else {
      out += (coeff == "1" ? "" : coeff + "*") + mon;
    }
  }
  return out;
}

// q = p^e with p prime, or ParameterError.
std::pair<std::uint64_t, unsigned> split_prime_power(std::uint64_t q) {
  if (q < 2) throw ParameterError("q must be a prime power");
  const auto ps = ff::prime_factors(q);
  if (ps.size() != 1) throw ParameterError(std::to_string(q) + " is not a prime power");
  unsigned e = 0;
  for (std::uint64_t r = q; r > 1; r /= ps[0]) ++e;
  return {ps[0], e};
}

struct Options {
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned e = 1;
  std::uint64_t q = 0;
  unsigned max_n = 64;
  std::string method = "tally";
  std::string format = "text";
  std::string config;
  std::optional<std::uint64_t> budget_q;
  std::optional<unsigned> budget_d;
  std::string fault;
  bool timings = false;
};

report::Budgets budgets_from(const Options& o) {
  report::Budgets b;
  if (o.budget_q) b.quadratic_q = *o.budget_q;
  if (o.budget_d) b.max_d = *o.budget_d;
  return b;
}

int cmd_equation(const Options& o) {
  const auto t = geometry::make_triple(o.p, o.m, o.e);
  const auto b = budgets_from(o);
  const auto f = poly::norm_product(static_cast<unsigned>(t.d), t.field, b.max_d);
  std::optional<bool> g_match;
  std::uint64_t pk = 1;
  while (pk <= t.d) pk *= t.p;
  if (pk == t.d + 1) {
    const auto g = poly::reduce(poly::complete_homogeneous(static_cast<unsigned>(t.d), poly::IntegerRing{}),
                                ff::field_create(t.p, 1));
    g_match = poly::equal_up_to_scalar(f, g);
  }
  if (o.format == "json") {
    json j{{"schema", report::kSchema}, {"params", t.to_json()}, {"polynomial", poly::to_json(f)}};
    j["g_comparison"] = g_match ? json(*g_match) : json(nullptr);
    std::cout << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "coefficient,n0,n1,n2\n";
    std::string text = poly::to_text(f);
    for (auto& ch : text) {
      if (ch == ' ') ch = ',';
    }
    std::cout << text;
  } else {
    std::cout << "f_" << t.d << " over GF(" << t.p << "): " << pretty(f) << '\n';
    if (g_match) std::cout << "g_" << t.d << " comparison: " << (*g_match ? "equal up to scalar" : "DIFFERENT") << '\n';
  }
  return g_match.value_or(true) ? kPass : kFail;
}

int cmd_verify(const Options& o) {
  std::optional<std::string> fault;
  if (!o.fault.empty()) fault = o.fault;
  const auto rep = report::run_verify(o.p, o.m, o.e, budgets_from(o), fault, o.timings);
  if (o.format == "json") {
    std::cout << rep.to_json().dump(2) << '\n';
  } else {
    std::cout << "verify p=" << rep.p << " m=" << rep.m << " e=" << rep.e << " q=" << rep.q << " d=" << rep.d << '\n';
    for (std::size_t k = 0; k < rep.checks.size(); ++k) {
      const auto& c = rep.checks[k];
      std::cout << (c.informational ? "INFO" : c.pass ? "PASS" : "FAIL") << ' ' << c.check;
      if (!c.pass) std::cout << " witness=" << c.witness.dump();
      if (c.informational) std::cout << ' ' << c.detail.dump();
      if (k < rep.timings.size()) std::cout << " (" << rep.timings[k] << " ms)";
      std::cout << '\n';
    }
    const auto* si = rep.find("self_intersection");
    std::cout << "C~^2 = " << si->detail.at("self_intersection").dump() << '\n';
    std::cout << (rep.passed() ? "all checks pass" : "CHECK FAILED") << '\n';
  }
  return rep.passed() ? kPass : kFail;
}

int cmd_survey(const Options& o) {
  std::ifstream in(o.config);
  if (!in) throw ParameterError("cannot read config '" + o.config + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& ex) {
    throw ParameterError(std::string("config is not valid JSON: ") + ex.what());
  }
  auto config = report::SurveyConfig::from_json(j);
  if (o.budget_q) config.budgets.quadratic_q = *o.budget_q;
  if (o.budget_d) config.budgets.max_d = *o.budget_d;
  const auto res = report::run_survey(config);
  if (o.format == "json") {
    std::cout << res.to_json().dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << res.to_csv();
  } else {
    std::cout << res.to_text();
  }
  return res.passed() ? kPass : kFail;
}

int cmd_identity(const Options& o) {
  const bool ok = poly::check_h_identity(o.max_n);
  const poly::IntegerRing Z;
  const auto prod = poly::ZPoly::linear(Z, 0, -1, 1) * poly::ZPoly::linear(Z, 1, 0, -1) *
                    poly::ZPoly::linear(Z, -1, 1, 0);
  const auto h2 = poly::h_poly(2, Z);
  const std::string sign = h2 == prod ? "+1" : h2 == prod.scaled(-1) ? "-1" : "none";
  if (o.format == "json") {
    json j{{"schema", report::kSchema}, {"max_n", o.max_n}, {"holds", ok}, {"h2", poly::to_json(h2)},
           {"h2_over_product", sign}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "h_n = h_2 g_(n-2) for 3 <= n <= " << o.max_n << ": " << (ok ? "holds" : "FAILS") << '\n';
    std::cout << "h_2 / ((x2-x1)(x0-x2)(x1-x0)) = " << sign << '\n';
  }
  return ok ? kPass : kFail;
}

int cmd_fermat(const Options& o) {
  const auto [p, e] = split_prime_power(o.q);
  const auto F = ff::field_create(p, e);
  const auto method = fermat::parse_method(o.method);
  const auto bound = method == fermat::CountMethod::naive ? budgets_from(o).quadratic_q : budgets_from(o).linear_q;
  const auto c = fermat::count_points(o.m, F, method, bound);
  std::optional<fermat::ShiodaKatsura> sk;
  if ((o.q - 1) % o.m == 0) sk = fermat::shioda_katsura_check(o.m, p, e, budgets_from(o).linear_q);
  if (o.format == "json") {
    std::cout << fermat::to_json(c, sk).dump(2) << '\n';
  } else if (o.format == "csv") {
    std::cout << "m,q,count,method\n" << c.m << ',' << c.q << ',' << c.count << ',' << fermat::to_string(c.method) << '\n';
  } else {
    std::cout << c.count << '\n';
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for curves of negative self-intersection on blowups of P^2 in characteristic p"};
  app.require_subcommand(1);
  Options o;
  const std::set<std::string> formats{"text", "json", "csv"};

  auto add_triple = [&](CLI::App* sub) {
    sub->add_option("--p", o.p, "characteristic")->required();
    sub->add_option("--m", o.m, "m, dividing p^e - 1")->required();
    sub->add_option("--e", o.e, "extension degree")->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "text, json or csv")->check(CLI::IsMember(formats))->capture_default_str();
    sub->add_option("--budget-q", o.budget_q, "largest q for quadratic enumeration");
    sub->add_option("--budget-d", o.budget_d, "largest d for the norm expansion");
  };

  auto* equation = app.add_subcommand("equation", "print the equation f_d of C_d");
  add_triple(equation);
  add_common(equation);

  auto* verify = app.add_subcommand("verify", "run every check for one triple");
  add_triple(verify);
  add_common(verify);
  verify->add_flag("--timings", o.timings, "include per-check timings");
#ifdef BNEG_FAULT_INJECTION
  verify->add_option("--inject-fault", o.fault, "corrupt the named check");
#endif

  auto* survey = app.add_subcommand("survey", "run verify over a grid");
  survey->add_option("--config", o.config, "JSON grid configuration")->required();
  add_common(survey);

  auto* identity = app.add_subcommand("identity", "check h_n = h_2 g_(n-2)");
  identity->add_option("--max-n", o.max_n, "largest n")->capture_default_str();
  identity->add_option("--format", o.format, "text or json")->check(CLI::IsMember(formats));

  auto* fermat_cmd = app.add_subcommand("fermat", "count points of the Fermat curve X_m");
  fermat_cmd->add_option("--m", o.m, "degree")->required()->check(CLI::PositiveNumber);
  fermat_cmd->add_option("--q", o.q, "field size")->required();
  fermat_cmd->add_option("--method", o.method, "naive or tally")
      ->check(CLI::IsMember({"naive", "tally"}))
      ->capture_default_str();
  add_common(fermat_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (*equation) return cmd_equation(o);
    if (*verify) return cmd_verify(o);
    if (*survey) return cmd_survey(o);
    if (*identity) return cmd_identity(o);
    if (*fermat_cmd) return cmd_fermat(o);
  } catch (const ResourceError& ex) {
    std::cerr << "budget exceeded: " << ex.what() << '\n';
    return kBudget;
  } catch (const ParameterError& ex) {
    std::cerr << "bad parameters: " << ex.what() << '\n';
    return kUsage;
  } catch (const FieldMismatch& ex) {
    std::cerr << "bad parameters: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::exception& ex) {
    std::cerr << "check failed: " << ex.what() << '\n';
    return kFail;
  }
  return kUsage;
}
