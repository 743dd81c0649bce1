#include "bneg/geometry.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>

#include "bneg/error.hpp"

namespace bneg::geometry {

using ff::Code;
using poly::FPoly;

nlohmann::json Triple::to_json() const {
  return {{"p", p}, {"m", m}, {"e", e}, {"q", q}, {"d", d}};
}

Triple make_triple(std::uint64_t p, unsigned m, unsigned e) {
  if (!ff::is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (m < 1) throw ParameterError("m must be at least 1");
  if (e < 1) throw ParameterError("e must be at least 1");
  const auto q = ff::checked_pow(p, e);
  if ((q - 1) % m != 0) {
    throw ParameterError("m = " + std::to_string(m) + " does not divide p^e - 1 = " + std::to_string(q - 1));
  }
  Triple t;
  t.p = p;
  t.m = m;
  t.e = e;
  t.q = q;
  t.d = (q - 1) / m;
  t.field = ff::field_create(p, e);
  return t;
}

ProjPoint apply_param(const ParamMap& map, const ProjPoint& point) {
  const auto& K = *point.field();
  std::array<Code, 3> x{};
  for (int i = 0; i < 3; ++i) {
    const auto k = static_cast<std::size_t>(i);
    x[k] = K.mul(map.twist[k], K.pow(point.code(i), map.d));
  }
  return {point.field(), x[0], x[1], x[2]};
}

std::vector<ProjPoint> z_points(unsigned m, const ff::Field& field) {
  if (m < 1) throw ParameterError("m must be at least 1");
  const Code zeta = field->root_of_unity(m);
  std::vector<Code> powers(m);
  powers[0] = 1;
  for (unsigned k = 1; k < m; ++k) powers[k] = field->mul(powers[k - 1], zeta);
  std::vector<ProjPoint> out;
  out.reserve(static_cast<std::size_t>(m) * m);
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = 0; j < m; ++j) out.emplace_back(field, powers[i], powers[j], 1);
  }
  return out;
}

namespace {

// Discrete logarithms of the m-th roots of unity to the base root_of_unity(m).
class RootLog {
 public:
  RootLog(const ff::FieldSpec& K, unsigned m) {
    const Code zeta = K.root_of_unity(m);
    Code z = 1;
    for (unsigned k = 0; k < m; ++k) {
      index_.emplace(z, k);
      z = K.mul(z, zeta);
    }
  }
  std::optional<unsigned> operator()(Code c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<Code, unsigned> index_;
};

}  // namespace

std::optional<std::size_t> z_index(unsigned m, const ProjPoint& point) {
  if (point.code(2) != 1) return std::nullopt;
  const auto& K = *point.field();
  if ((K.q() - 1) % m != 0) return std::nullopt;
  RootLog log(K, m);
  const auto i = log(point.code(0));
  const auto j = log(point.code(1));
  if (!i || !j) return std::nullopt;
  return static_cast<std::size_t>(*i) * m + *j;
}

std::vector<ProjPoint> enumerate_C1(const ff::Field& field, std::uint64_t bound) {
  const auto& K = *field;
  if (K.q() > bound) {
    throw ResourceError("enumerating C_1 over " + K.name() + " exceeds the bound " + std::to_string(bound));
  }
  const Code minus_one = K.neg(1);
  std::vector<ProjPoint> out;
  out.reserve(K.q() + 1);
  for (Code a = 0; a < K.q(); ++a) out.emplace_back(field, a, K.sub(minus_one, a), 1);
  out.emplace_back(field, 1, minus_one, 0);
  return out;
}

std::uint64_t MultiplicityProfile::sum() const {
  std::uint64_t s = 0;
  for (auto v : mults) s += v;
  return s;
}

std::uint64_t MultiplicityProfile::sum_squares() const {
  std::uint64_t s = 0;
  for (auto v : mults) s += v * v;
  return s;
}

nlohmann::json MultiplicityProfile::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t k = 0; k < mults.size(); ++k) {
    pts.push_back({{"i", k / m}, {"j", k % m}, {"mult", mults[k]}});
  }
  return {{"m", m},
          {"p", p},
          {"e", e},
          {"d", d},
          {"source", source == ProfileSource::taylor ? "taylor" : "preimage"},
          {"points", pts}};
}

namespace {

MultiplicityProfile empty_profile(const Triple& t, ProfileSource src) {
  MultiplicityProfile prof;
  prof.p = t.p;
  prof.m = t.m;
  prof.e = t.e;
  prof.d = t.d;
  prof.source = src;
  prof.mults.assign(static_cast<std::size_t>(t.m) * t.m, 0);
  return prof;
}

}  // namespace

MultiplicityProfile multiplicity_profile_taylor(std::uint64_t p, unsigned m, unsigned e, unsigned max_degree) {
  const auto t = make_triple(p, m, e);
  if (t.d > max_degree) {
    throw ResourceError("norm expansion of degree " + std::to_string(t.d) + " exceeds the bound " +
                        std::to_string(max_degree));
  }
  return multiplicity_profile_taylor(t, poly::norm_product(static_cast<unsigned>(t.d), t.field, max_degree));
}

MultiplicityProfile multiplicity_profile_taylor(const Triple& t, const FPoly& f_d) {
  auto prof = empty_profile(t, ProfileSource::taylor);
  const auto pts = z_points(t.m, t.field);
  for (std::size_t k = 0; k < pts.size(); ++k) prof.mults[k] = poly::multiplicity_at(f_d, pts[k]);
  return prof;
}

MultiplicityProfile multiplicity_profile_preimage(std::uint64_t p, unsigned m, unsigned e, std::uint64_t bound) {
  return multiplicity_profile_preimage(make_triple(p, m, e), bound);
}

MultiplicityProfile multiplicity_profile_preimage(const Triple& t, std::uint64_t bound) {
  const auto& K = *t.field;
  if (K.q() > bound) {
    throw ResourceError("preimage tally over " + K.name() + " exceeds the bound " + std::to_string(bound));
  }
  auto prof = empty_profile(t, ProfileSource::preimage);
  RootLog log(K, t.m);
  const Code minus_one = K.neg(1);
  for (Code a = 1; a < K.q(); ++a) {
    const Code b = K.sub(minus_one, a);
    if (b == 0) continue;
    const auto i = log(K.pow(a, t.d));
    const auto j = log(K.pow(b, t.d));
    if (!i || !j) throw InternalError("phi_d image of a torus point missed Z_m");
    ++prof.mults[static_cast<std::size_t>(*i) * t.m + *j];
  }
  return prof;
}

std::int64_t CurveClass::self_intersection() const {
  auto s = static_cast<std::int64_t>(degree * degree);
  for (auto v : mults) s -= static_cast<std::int64_t>(v * v);
  return s;
}

std::int64_t CurveClass::canonical_degree() const {
  auto s = -3 * static_cast<std::int64_t>(degree);
  for (auto v : mults) s += static_cast<std::int64_t>(v);
  return s;
}

CurveClass strict_transform_class(std::uint64_t p, unsigned m, unsigned e) {
  auto prof = multiplicity_profile_taylor(p, m, e);
  return {prof.d, std::move(prof.mults)};
}

std::int64_t expected_self_intersection(std::uint64_t d, unsigned m) {
  return static_cast<std::int64_t>(d) * (3 - static_cast<std::int64_t>(m)) - 1;
}

namespace {

// f restricted to the row x1 = b, x2 = 1, as coefficients of x0^k.
std::vector<Code> collapse_row(const FPoly& f, const ff::FieldSpec& K, const std::vector<Code>& bpow) {
  std::vector<Code> u(f.degree() + 1, 0);
  for (const auto& [mono, c] : f.terms()) {
    u[mono.exps[0]] = K.add(u[mono.exps[0]], K.mul(c, bpow[mono.exps[1]]));
  }
  return u;
}

Code horner(const std::vector<Code>& u, const ff::FieldSpec& K, Code a) {
  Code v = 0;
  for (auto it = u.rbegin(); it != u.rend(); ++it) v = K.add(K.mul(v, a), *it);
  return v;
}

}  // namespace

std::vector<ProjPoint> rational_singular_points(const FPoly& f, const ff::Field& field, std::uint64_t plane_bound) {
  const auto& K = *field;
  if (K.q() > plane_bound) {
    throw ResourceError("singular-point search over " + K.name() + " exceeds the plane bound " +
                        std::to_string(plane_bound));
  }
  if (f.is_zero()) throw ParameterError("singular locus of the zero polynomial");
  const auto grads = poly::partials(f);
  std::vector<ProjPoint> out;

  auto singular_at = [&](const std::array<Code, 3>& x) {
    if (poly::evaluate(f, K, x) != 0) return false;
    for (const auto& g : grads) {
      if (!g.is_zero() && poly::evaluate(g, K, x) != 0) return false;
    }
    return true;
  };

  const unsigned n = f.degree();
  std::vector<Code> bpow(n + 1);
  for (Code b = 0; b < K.q(); ++b) {
    bpow[0] = 1;
    for (unsigned k = 1; k <= n; ++k) bpow[k] = K.mul(bpow[k - 1], b);
    const auto u = collapse_row(f, K, bpow);
    std::array<std::vector<Code>, 3> du;
    bool have_du = false;
    for (Code a = 0; a < K.q(); ++a) {
      if (horner(u, K, a) != 0) continue;
      if (!have_du) {
        for (std::size_t i = 0; i < 3; ++i) du[i] = collapse_row(grads[i], K, bpow);
        have_du = true;
      }
      bool sing = true;
      for (std::size_t i = 0; i < 3 && sing; ++i) sing = horner(du[i], K, a) == 0;
      if (sing) out.emplace_back(field, a, b, 1);
    }
  }
  for (Code a = 0; a < K.q(); ++a) {
    if (singular_at({a, 1, 0})) out.emplace_back(field, a, 1, 0);
  }
  if (singular_at({1, 0, 0})) out.emplace_back(field, 1, 0, 0);
  return out;
}

nlohmann::json MainTheoremReport::to_json() const {
  auto pts = [](const std::vector<ProjPoint>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& P : v) a.push_back(P.to_string());
    return a;
  };
  return {{"params", triple.to_json()},
          {"self_intersection", self_intersection},
          {"expected", expected},
          {"lattice_ok", lattice_ok},
          {"oracles_agree", oracles_agree},
          {"sums_ok", sums_ok},
          {"rational_ok", rational_ok},
          {"singular_ok", singular_ok},
          {"taylor", taylor.to_json()},
          {"preimage", preimage.to_json()},
          {"singular_points", pts(singular_points)},
          {"stray_singular_points", pts(stray_singular_points)}};
}

MainTheoremReport check_main_theorem(const Triple& t, MultiplicityProfile taylor, MultiplicityProfile preimage,
                                     std::vector<ProjPoint> singular_points) {
  MainTheoremReport r;
  r.triple = t;
  const CurveClass cls{t.d, taylor.mults};
  r.self_intersection = cls.self_intersection();
  r.expected = expected_self_intersection(t.d, t.m);
  r.lattice_ok = r.self_intersection == r.expected;
  r.oracles_agree = taylor.mults == preimage.mults;

  const std::uint64_t want_sum = t.d * t.m - 1;
  const auto want_sq = static_cast<std::int64_t>(t.d * t.d) +
                       static_cast<std::int64_t>(t.d) * (static_cast<std::int64_t>(t.m) - 3) + 1;
  r.sums_ok = true;
  for (const auto* prof : {&taylor, &preimage}) {
    if (prof->sum() != want_sum || static_cast<std::int64_t>(prof->sum_squares()) != want_sq) r.sums_ok = false;
  }

  std::uint64_t delta = 0;
  for (auto v : taylor.mults) delta += v * (v == 0 ? 0 : v - 1);
  r.rational_ok = delta == (t.d - 1) * (t.d == 1 ? 0 : t.d - 2);

  r.singular_ok = true;
  for (const auto& P : singular_points) {
    if (!z_index(t.m, P)) {
      r.stray_singular_points.push_back(P);
      r.singular_ok = false;
    }
  }
  r.taylor = std::move(taylor);
  r.preimage = std::move(preimage);
  r.singular_points = std::move(singular_points);
  return r;
}

MainTheoremReport verify_main_theorem(std::uint64_t p, unsigned m, unsigned e, std::uint64_t plane_bound) {
  const auto t = make_triple(p, m, e);
  if (t.d > poly::kDefaultNormDegreeBound) {
    throw ResourceError("norm expansion of degree " + std::to_string(t.d) + " exceeds the bound " +
                        std::to_string(poly::kDefaultNormDegreeBound));
  }
  const auto f = poly::norm_product(static_cast<unsigned>(t.d), t.field);
  return check_main_theorem(t, multiplicity_profile_taylor(t, f), multiplicity_profile_preimage(t),
                            rational_singular_points(f, t.field, plane_bound));
}

std::array<Code, 3> twist_from_exponents(const ff::FieldSpec& field, unsigned m, unsigned i, unsigned j) {
  const Code zeta = field.root_of_unity(m);
  return {field.pow(zeta, i), field.pow(zeta, j), 1};
}

std::vector<std::array<Code, 3>> nonidentity_twists(const ff::FieldSpec& field, unsigned m) {
  std::vector<std::array<Code, 3>> out;
  for (unsigned i = 0; i < m; ++i) {
    for (unsigned j = 0; j < m; ++j) {
      if (i != 0 || j != 0) out.push_back(twist_from_exponents(field, m, i, j));
    }
  }
  return out;
}

nlohmann::json GaloisIntersection::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& P : coincidences) pts.push_back(P.to_string());
  return {{"twist", twist},
          {"predicted", predicted},
          {"enumerated", enumerated},
          {"coincidences", pts},
          {"local_multiplicities", local_multiplicities}};
}

namespace {

std::array<Code, 3> normalize_twist(const std::array<Code, 3>& twist, const Triple& t) {
  const auto& K = *t.field;
  for (auto z : twist) {
    if (z == 0 || z >= K.q() || K.pow(z, t.m) != 1) throw ParameterError("twist coordinates must lie in mu_m");
  }
  const Code s = K.inv(twist[2]);
  std::array<Code, 3> n{K.mul(twist[0], s), K.mul(twist[1], s), 1};
  if (n[0] == 1 && n[1] == 1) throw ParameterError("the identity twist has no Galois intersection");
  return n;
}

// Truncated power series over K: coefficients of t^0 .. t^(n-1).
using Series = std::vector<Code>;

Series series_mul(const Series& a, const Series& b, const ff::FieldSpec& K) {
  Series c(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < c.size(); ++j) c[i + j] = K.add(c[i + j], K.mul(a[i], b[j]));
  }
  return c;
}

Series series_pow(Series base, std::uint64_t k, const ff::FieldSpec& K) {
  Series r(base.size(), 0);
  r[0] = 1;
  while (k) {
    if (k & 1) r = series_mul(r, base, K);
    k >>= 1;
    if (k) base = series_mul(base, base, K);
  }
  return r;
}

}  // namespace

std::uint64_t local_contact_order(const std::array<Code, 3>& twist, const Triple& t, int k) {
  const auto& K = *t.field;
  const auto z = normalize_twist(twist, t);
  int i = -1, j = -1;
  for (int l = 0; l < 3; ++l) {
    if (l == k) continue;
    (i < 0 ? i : j) = l;
  }
  const std::size_t n = t.d + 2;
  std::array<Series, 3> x;
  for (auto& s : x) s.assign(n, 0);
  x[static_cast<std::size_t>(k)][1] = 1;  // x_k = t
  x[static_cast<std::size_t>(i)][0] = 1;  // x_i = 1
  x[static_cast<std::size_t>(j)][0] = K.neg(1);
  x[static_cast<std::size_t>(j)][1] = K.neg(1);  // x_j = -1 - t
  // Affine coordinates x_l^d / x_i^d of both images differ by the factor
  // zeta_l / zeta_i; the contact order is the least order of the differences.
  std::uint64_t order = std::numeric_limits<std::uint64_t>::max();
  const Code zi_inv = K.inv(z[static_cast<std::size_t>(i)]);
  for (int l : {j, k}) {
    const auto ll = static_cast<std::size_t>(l);
    const Code factor = K.sub(1, K.mul(z[ll], zi_inv));
    const auto s = series_pow(x[ll], t.d, K);
    for (std::size_t r = 0; r < n; ++r) {
      if (K.mul(s[r], factor) != 0) {
        order = std::min<std::uint64_t>(order, r);
        break;
      }
    }
  }
  return order;
}

GaloisIntersection galois_intersection(const std::array<Code, 3>& twist, std::uint64_t p, unsigned m, unsigned e) {
  return galois_intersection(twist, make_triple(p, m, e));
}

GaloisIntersection galois_intersection(const std::array<Code, 3>& twist, const Triple& t) {
  GaloisIntersection g;
  g.twist = normalize_twist(twist, t);
  const auto& z = g.twist;
  g.predicted = (z[0] == z[1] || z[0] == z[2] || z[1] == z[2]) ? t.d : 0;

  for (const auto& P : enumerate_C1(t.field)) {
    if (!(apply_param({t.d, z}, P) == apply_param({t.d, {1, 1, 1}}, P))) continue;
    g.coincidences.push_back(P);
    int k = -1;
    for (int l = 0; l < 3; ++l) {
      if (P.code(l) == 0) k = l;
    }
    const auto mult = k < 0 ? std::numeric_limits<std::uint64_t>::max() : local_contact_order(z, t, k);
    g.local_multiplicities.push_back(mult);
    constexpr auto kInf = std::numeric_limits<std::uint64_t>::max();
    g.enumerated = (mult == kInf || g.enumerated == kInf) ? kInf : g.enumerated + mult;
  }
  return g;
}

bool GaloisTable::ok() const {
  if (!std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok(); })) return false;
  return decomposition_sum == static_cast<std::int64_t>(2 * triple.d * triple.m) - 1;
}

nlohmann::json GaloisTable::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) rs.push_back(r.to_json());
  return {{"params", triple.to_json()},
          {"self_intersection", self_intersection},
          {"decomposition_sum", decomposition_sum},
          {"expected_sum", 2 * triple.d * triple.m - 1},
          {"rows", rs}};
}

GaloisTable galois_table(const Triple& t, std::int64_t self_intersection) {
  GaloisTable table;
  table.triple = t;
  table.self_intersection = self_intersection;
  table.decomposition_sum = self_intersection;
  for (const auto& z : nonidentity_twists(*t.field, t.m)) {
    table.rows.push_back(galois_intersection(z, t));
    table.decomposition_sum += static_cast<std::int64_t>(table.rows.back().enumerated);
  }
  return table;
}

bool verify_total_splitting(unsigned a, unsigned d, const ff::Field& field) {
  const auto& K = *field;
  if (a < 1 || d < 1) throw ParameterError("a and d must be positive");
  if ((K.q() - 1) % (static_cast<std::uint64_t>(a) * d) != 0) {
    throw ParameterError("a d must divide q - 1");
  }
  const poly::FieldRing ring(field);
  const auto f_ad = poly::embed(poly::norm_product(a * d, field), field);
  FPoly lhs(ring, a * a * d);
  for (const auto& [mono, c] : f_ad.terms()) {
    lhs.add_term({{mono.exps[0] * a, mono.exps[1] * a, mono.exps[2] * a}}, c);
  }

  const auto f_d = poly::embed(poly::norm_product(d, field), field);
  const Code zeta = K.root_of_unity(a);
  std::vector<FPoly> factors;
  for (unsigned i = 0; i < a; ++i) {
    for (unsigned j = 0; j < a; ++j) {
      const Code z0 = K.pow(zeta, i), z1 = K.pow(zeta, j);
      FPoly g(ring, d);
      for (const auto& [mono, c] : f_d.terms()) {
        g.add_term(mono, K.mul(c, K.mul(K.pow(z0, mono.exps[0]), K.pow(z1, mono.exps[1]))));
      }
      factors.push_back(poly::normalized(g));
    }
  }
  FPoly rhs = FPoly::monomial(ring, {{0, 0, 0}}, 1);
  for (const auto& g : factors) rhs = rhs * g;
  if (!poly::equal_up_to_scalar(lhs, rhs)) return false;
  for (std::size_t u = 0; u < factors.size(); ++u) {
    for (std::size_t v = u + 1; v < factors.size(); ++v) {
      if (factors[u] == factors[v]) return false;
    }
  }
  return true;
}

std::uint64_t phi_collisions_off_z(const Triple& t) {
  std::map<ProjPoint, std::uint64_t> hits;
  for (const auto& P : enumerate_C1(t.field)) {
    auto img = apply_param({t.d, {1, 1, 1}}, P);
    if (!z_index(t.m, img)) ++hits[img];
  }
  std::uint64_t bad = 0;
  for (const auto& [_, n] : hits) bad += n > 1 ? 1 : 0;
  return bad;
}

}  // namespace bneg::geometry
