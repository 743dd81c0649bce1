#include "bneg/fermat.hpp"

#include <vector>

#include "bneg/error.hpp"

namespace bneg::fermat {

using ff::Code;

std::string to_string(CountMethod method) { return method == CountMethod::naive ? "naive" : "tally"; }

CountMethod parse_method(const std::string& name) {
  if (name == "naive") return CountMethod::naive;
  if (name == "tally") return CountMethod::tally;
  throw ParameterError("unknown counting method '" + name + "' (expected naive or tally)");
}

namespace {

std::vector<Code> mth_powers(unsigned m, const ff::FieldSpec& K) {
  std::vector<Code> pw(K.q());
  for (Code y = 0; y < K.q(); ++y) pw[y] = K.pow(y, m);
  return pw;
}

std::vector<std::uint32_t> power_tally(unsigned m, const ff::FieldSpec& K) {
  std::vector<std::uint32_t> r(K.q(), 0);
  for (Code y = 0; y < K.q(); ++y) ++r[K.pow(y, m)];
  return r;
}

void require_m(unsigned m) {
  if (m < 1) throw ParameterError("Fermat degree m must be at least 1");
}

}  // namespace

FermatCount count_points_naive(unsigned m, const ff::Field& field, std::uint64_t bound) {
  require_m(m);
  const auto& K = *field;
  if (K.q() > bound) {
    throw ResourceError("naive Fermat count over " + K.name() + " exceeds the bound q <= " + std::to_string(bound));
  }
  const auto pw = mth_powers(m, K);
  const Code one = 1;
  std::uint64_t n = 0;
  for (Code a = 0; a < K.q(); ++a) {
    for (Code b = 0; b < K.q(); ++b) {
      if (K.add(K.add(pw[a], pw[b]), one) == 0) ++n;
    }
  }
  for (Code a = 0; a < K.q(); ++a) {
    if (K.add(pw[a], one) == 0) ++n;  // [a:1:0]
  }
  if (pw[1] == 0) ++n;  // [1:0:0] never lies on X_m
  return {m, K.q(), n, CountMethod::naive};
}

FermatCount count_points_tally(unsigned m, const ff::Field& field, std::uint64_t bound) {
  require_m(m);
  const auto& K = *field;
  if (K.q() > bound) {
    throw ResourceError("tally Fermat count over " + K.name() + " exceeds the bound q <= " + std::to_string(bound));
  }
  const auto r = power_tally(m, K);
  const Code minus_one = K.neg(1);
  std::uint64_t n = 0;
  for (Code s = 0; s < K.q(); ++s) {
    if (r[s]) n += static_cast<std::uint64_t>(r[s]) * r[K.sub(minus_one, s)];
  }
  n += r[minus_one];
  return {m, K.q(), n, CountMethod::tally};
}

FermatCount count_points(unsigned m, const ff::Field& field, CountMethod method, std::uint64_t bound) {
  return method == CountMethod::naive ? count_points_naive(m, field, bound) : count_points_tally(m, field, bound);
}

std::uint64_t count_axis_points(unsigned m, const ff::Field& field) {
  require_m(m);
  const auto& K = *field;
  const Code minus_one = K.neg(1);
  std::uint64_t roots = 0;
  for (Code y = 0; y < K.q(); ++y) roots += K.pow(y, m) == minus_one ? 1 : 0;
  return 3 * roots;
}

bool tally_is_kummer(unsigned m, const ff::Field& field) {
  const auto r = power_tally(m, *field);
  for (Code s = 1; s < field->q(); ++s) {
    if (r[s] != 0 && r[s] != m) return false;
  }
  return true;
}

nlohmann::json ShiodaKatsura::to_json() const {
  nlohmann::json j{{"m", m}, {"p", p}, {"e", e}, {"applicable", applicable}};
  j["formula"] = formula ? nlohmann::json(*formula) : nlohmann::json(nullptr);
  j["count"] = count ? nlohmann::json(*count) : nlohmann::json(nullptr);
  j["match"] = match ? nlohmann::json(*match) : nlohmann::json(nullptr);
  return j;
}

ShiodaKatsura shioda_katsura_check(unsigned m, std::uint64_t p, unsigned e, std::uint64_t bound) {
  require_m(m);
  ShiodaKatsura sk;
  sk.m = m;
  sk.p = p;
  sk.e = e;
  const auto q = ff::checked_pow(p, e);
  bool minus_one = false;
  std::uint64_t pv = 1 % m;
  for (unsigned nu = 1; nu <= m && !minus_one; ++nu) {
    pv = static_cast<std::uint64_t>((static_cast<unsigned __int128>(pv) * p) % m);
    minus_one = pv == (m - 1) % m;
  }
  sk.applicable = e % 2 == 0 && minus_one && q % m == 1 % m;
  if (!sk.applicable) return sk;

  const auto g2 = static_cast<__int128>(m - 1) * (m - 2) / 2;
  const __int128 v = 1 - g2 * static_cast<__int128>(ff::checked_pow(p, e / 2)) + static_cast<__int128>(q);
  sk.formula = static_cast<std::int64_t>(v);
  if (q <= bound) {
    sk.count = count_points_tally(m, ff::field_create(p, e), bound).count;
    sk.match = static_cast<std::int64_t>(*sk.count) == *sk.formula;
  }
  return sk;
}

MultFromCount mult_from_count(unsigned m, std::uint64_t p, unsigned e, std::uint64_t bound) {
  require_m(m);
  const auto q = ff::checked_pow(p, e);
  if ((q - 1) % m != 0) throw ParameterError("m must divide p^e - 1");
  MultFromCount r;
  r.count = count_points_tally(m, ff::field_create(p, e), bound).count;
  r.numerator = static_cast<std::int64_t>(r.count) - 3 * static_cast<std::int64_t>(m);
  r.denominator = static_cast<std::uint64_t>(m) * m;
  if (r.numerator >= 0 && static_cast<std::uint64_t>(r.numerator) % r.denominator == 0) {
    r.value = static_cast<std::uint64_t>(r.numerator) / r.denominator;
  }
  return r;
}

bool hasse_weil_ok(unsigned m, std::uint64_t q, std::uint64_t count) {
  const __int128 dev = static_cast<__int128>(count) - static_cast<__int128>(q) - 1;
  const __int128 w = static_cast<__int128>(m - 1) * (m - 2);
  return dev * dev <= w * w * static_cast<__int128>(q);
}

nlohmann::json to_json(const FermatCount& c, const std::optional<ShiodaKatsura>& sk) {
  nlohmann::json j{{"m", c.m}, {"q", c.q}, {"count", c.count}, {"method", to_string(c.method)}};
  j["sk_formula"] = sk && sk->formula ? nlohmann::json(*sk->formula) : nlohmann::json(nullptr);
  j["sk_applicable"] = sk ? sk->applicable : false;
  j["sk_match"] = sk && sk->match ? nlohmann::json(*sk->match) : nlohmann::json(nullptr);
  return j;
}

}  // namespace bneg::fermat
