#include "bneg/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace bneg::poly {

namespace {

using ff::Code;

void require_embeddable(const ff::FieldSpec& from, const ff::FieldSpec& to) {
  if (from.same_as(to)) return;
  if (from.is_prime_field() && from.p() == to.p()) return;
  throw FieldMismatch("polynomial over " + from.name() + " cannot be evaluated in " + to.name());
}

// Rewrites a polynomial in u_i = x_i^(1/d) as one in x_i.
template <class Ring>
HomogPoly<Ring> divide_exponents(const HomogPoly<Ring>& f, unsigned d) {
  if (f.degree() % d != 0) throw InternalError("norm degree is not a multiple of d");
  HomogPoly<Ring> r(f.ring(), f.degree() / d);
  for (const auto& [m, c] : f.terms()) {
    Monomial out;
    for (std::size_t i = 0; i < 3; ++i) {
      if (m.exps[i] % d != 0) throw InternalError("norm expansion left an exponent not divisible by d");
      out.exps[i] = m.exps[i] / d;
    }
    r.add_term(out, c);
  }
  return r;
}

FPoly to_prime_field(const FPoly& f) {
  const auto& spec = f.ring().spec();
  FieldRing prime(spec.is_prime_field() ? f.ring().field() : ff::field_create(spec.p(), 1));
  FPoly r(prime, f.degree());
  for (const auto& [m, c] : f.terms()) {
    if (!spec.in_prime_field(c)) throw InternalError("norm coefficient is not fixed by Frobenius");
    r.add_term(m, c);
  }
  return r;
}

void require_norm_parameters(unsigned d, const ff::FieldSpec& spec) {
  if (d == 0) throw ParameterError("d must be positive");
  if ((spec.q() - 1) % d != 0) {
    throw ParameterError("d = " + std::to_string(d) + " does not divide q - 1 = " +
                         std::to_string(spec.q() - 1));
  }
}

}  // namespace

bool h_identity_holds(const ZPoly& h_n, unsigned n) {
  if (n < 3) throw ParameterError("the identity is stated for n >= 3");
  const IntegerRing zz;
  return (h_n - h_poly(2, zz) * complete_homogeneous(n - 2, zz)).is_zero();
}

bool check_h_identity(unsigned n_max) {
  if (n_max < 3) throw ParameterError("n_max must be at least 3");
  const IntegerRing zz;
  for (unsigned n = 3; n <= n_max; ++n) {
    if (!h_identity_holds(h_poly(n, zz), n)) return false;
  }
  return true;
}

FPoly reduce(const ZPoly& f, const ff::Field& field) {
  FieldRing ring(field);
  FPoly r(ring, f.degree());
  const BigInt p = field->p();
  for (const auto& [m, c] : f.terms()) {
    BigInt v = c % p;
    if (v < 0) v += p;
    r.add_term(m, static_cast<Code>(v));
  }
  return r;
}

FPoly embed(const FPoly& f, const ff::Field& target) {
  require_embeddable(f.ring().spec(), *target);
  FPoly r(FieldRing(target), f.degree());
  for (const auto& [m, c] : f.terms()) r.add_term(m, c);
  return r;
}

FPoly norm_product(unsigned d, const ff::Field& field, unsigned max_degree) {
  const auto& F = *field;
  require_norm_parameters(d, F);
  if (d > max_degree) {
    throw ResourceError("norm expansion of degree " + std::to_string(d) + " exceeds the bound " +
                        std::to_string(max_degree));
  }
  // prod_zeta (A + zeta B) = A^d - (-B)^d with A = u0 + zeta' u2, B = u1.
  // Dehomogenizing u0 = 1 and writing s = u2, w = x1 = u1^d, each remaining
  // factor is (1 + zeta' s)^d - c w with c = (-1)^d.
  const Code c = (d % 2 == 0) ? F.one() : F.neg(F.one());
  std::vector<std::pair<unsigned, Code>> binom;
  for (unsigned j = 0; j <= d; ++j) {
    const auto b = ff::binomial_mod(d, j, F.p());
    if (b != 0) binom.emplace_back(j, F.from_int(static_cast<std::int64_t>(b)));
  }
  const Code zeta = F.root_of_unity(d);

  // acc[b][a] is the coefficient of s^a w^b.
  std::vector<std::vector<Code>> acc{{F.one()}};
  std::vector<Code> factor;
  Code zeta_k = F.one();
  for (unsigned k = 0; k < d; ++k, zeta_k = F.mul(zeta_k, zeta)) {
    factor.assign(d + 1, 0);
    for (const auto& [j, b] : binom) factor[j] = F.mul(b, F.pow(zeta_k, j));
    const std::size_t rows = acc.size();
    const std::size_t len = acc[0].size();
    std::vector<std::vector<Code>> next(rows + 1, std::vector<Code>(len + d, 0));
    for (std::size_t b = 0; b < rows; ++b) {
      const auto& row = acc[b];
      auto& out = next[b];
      for (std::size_t a = 0; a < len; ++a) {
        const Code v = row[a];
        if (v == 0) continue;
        for (const auto& [j, _] : binom) {
          out[a + j] = F.add(out[a + j], F.mul(v, factor[j]));
        }
      }
      auto& up = next[b + 1];
      for (std::size_t a = 0; a < len; ++a) {
        if (row[a] != 0) up[a] = F.sub(up[a], F.mul(c, row[a]));
      }
    }
    acc = std::move(next);
  }

  FPoly r(FieldRing(field), d);
  for (unsigned b = 0; b < acc.size(); ++b) {
    for (std::size_t a = 0; a < acc[b].size(); ++a) {
      const Code v = acc[b][a];
      if (v == 0) continue;
      if (a % d != 0) throw InternalError("norm expansion left a power of s not divisible by d");
      const auto k2 = static_cast<unsigned>(a / d);
      if (k2 + b > d) throw InternalError("norm expansion exceeded the expected degree");
      r.add_term({{d - k2 - b, b, k2}}, v);
    }
  }
  return to_prime_field(r);
}

FPoly norm_product_direct(unsigned d, const ff::Field& field) {
  const auto& F = *field;
  require_norm_parameters(d, F);
  FieldRing ring(field);
  const Code zeta = F.root_of_unity(d);
  FPoly prod = FPoly::monomial(ring, {{0, 0, 0}}, F.one());
  Code z1 = F.one();
  for (unsigned i = 0; i < d; ++i, z1 = F.mul(z1, zeta)) {
    Code z2 = F.one();
    for (unsigned j = 0; j < d; ++j, z2 = F.mul(z2, zeta)) {
      prod = prod * FPoly::linear(ring, F.one(), z1, z2);
    }
  }
  return to_prime_field(divide_exponents(prod, d));
}

ZPoly norm_product_integer(unsigned d) {
  if (d != 1 && d != 2) throw ParameterError("mu_d lies in Z only for d = 1, 2");
  const IntegerRing zz;
  const std::vector<int> roots = d == 1 ? std::vector<int>{1} : std::vector<int>{1, -1};
  ZPoly prod = ZPoly::monomial(zz, {{0, 0, 0}}, 1);
  for (int z1 : roots) {
    for (int z2 : roots) prod = prod * ZPoly::linear(zz, 1, z1, z2);
  }
  return divide_exponents(prod, d);
}

FPoly moore_determinant(const ff::Field& field) {
  const auto q = static_cast<unsigned>(field->q());
  const unsigned q2 = q * q;
  FieldRing ring(field);
  FPoly det(ring, q2 + q + 1);
  const Code one = ring.one();
  const Code minus = ring.neg(one);
  det.add_term({{q, q2, 1}}, one);
  det.add_term({{q2, q, 1}}, minus);
  det.add_term({{1, q, q2}}, one);
  det.add_term({{1, q2, q}}, minus);
  det.add_term({{q2, 1, q}}, one);
  det.add_term({{q, 1, q2}}, minus);
  return det;
}

FPoly rational_line_product(const ff::Field& field) {
  FieldRing ring(field);
  const Code q = field->q();
  FPoly prod = FPoly::monomial(ring, {{0, 0, 0}}, 1);
  // Normalized representatives: [a0:a1:1], [a0:1:0], [1:0:0].
  for (Code a0 = 0; a0 < q; ++a0) {
    for (Code a1 = 0; a1 < q; ++a1) prod = prod * FPoly::linear(ring, a0, a1, 1);
  }
  for (Code a0 = 0; a0 < q; ++a0) prod = prod * FPoly::linear(ring, a0, 1, 0);
  prod = prod * FPoly::linear(ring, 1, 0, 0);
  return prod;
}

unsigned multiplicity_at(const FPoly& f, const geometry::ProjPoint& point) {
  return multiplicity_at(f, point, point.chart());
}

unsigned multiplicity_at(const FPoly& f, const geometry::ProjPoint& point, int chart) {
  if (f.is_zero()) throw ParameterError("multiplicity of the zero polynomial is undefined");
  const auto& K = *point.field();
  require_embeddable(f.ring().spec(), K);
  if (chart < 0 || chart > 2 || point.code(chart) == 0) {
    throw ParameterError("chart coordinate must be nonzero at the point");
  }
  // Affine coordinates (alpha, beta) of the point in the chart x_chart = 1;
  // u, v are the remaining coordinates in index order.
  std::array<int, 2> idx{};
  for (int i = 0, k = 0; i < 3; ++i) {
    if (i != chart) idx[static_cast<std::size_t>(k++)] = i;
  }
  const Code scale = K.inv(point.code(chart));
  const Code alpha = K.mul(point.code(idx[0]), scale);
  const Code beta = K.mul(point.code(idx[1]), scale);

  struct Term {
    unsigned a, b;
    Code c;
  };
  std::vector<Term> terms;
  terms.reserve(f.size());
  unsigned deg = f.degree();
  for (const auto& [m, c] : f.terms()) {
    terms.push_back({m.exps[static_cast<std::size_t>(idx[0])], m.exps[static_cast<std::size_t>(idx[1])], c});
  }
  std::vector<Code> apow(deg + 1), bpow(deg + 1);
  apow[0] = bpow[0] = K.one();
  for (unsigned k = 1; k <= deg; ++k) {
    apow[k] = K.mul(apow[k - 1], alpha);
    bpow[k] = K.mul(bpow[k - 1], beta);
  }
  std::vector<std::vector<Code>> binom(deg + 1);
  for (unsigned n = 0; n <= deg; ++n) {
    binom[n].resize(n + 1);
    binom[n][0] = binom[n][n] = K.one();
    for (unsigned k = 1; k < n; ++k) binom[n][k] = K.add(binom[n - 1][k - 1], binom[n - 1][k]);
  }
  // The coefficient of u^i v^j in f(u + alpha, v + beta) is
  //   sum_{a >= i, b >= j} c_ab C(a,i) C(b,j) alpha^(a-i) beta^(b-j).
  for (unsigned t = 0; t <= deg; ++t) {
    for (unsigned i = 0; i <= t; ++i) {
      const unsigned j = t - i;
      Code sum = 0;
      for (const auto& term : terms) {
        if (term.a < i || term.b < j) continue;
        const Code bin = K.mul(binom[term.a][i], binom[term.b][j]);
        if (bin == 0) continue;
        Code v = K.mul(term.c, K.mul(apow[term.a - i], bpow[term.b - j]));
        sum = K.add(sum, K.mul(v, bin));
      }
      if (sum != 0) return t;
    }
  }
  throw InternalError("nonzero polynomial vanished to every order");
}

Code evaluate(const FPoly& f, const ff::FieldSpec& K, const std::array<Code, 3>& x) {
  require_embeddable(f.ring().spec(), K);
  const unsigned n = f.degree();
  std::array<std::vector<Code>, 3> pw;
  for (std::size_t i = 0; i < 3; ++i) {
    pw[i].resize(n + 1);
    pw[i][0] = K.one();
    for (unsigned k = 1; k <= n; ++k) pw[i][k] = K.mul(pw[i][k - 1], x[i]);
  }
  Code sum = 0;
  for (const auto& [m, c] : f.terms()) {
    const Code v = K.mul(K.mul(pw[0][m.exps[0]], pw[1][m.exps[1]]), pw[2][m.exps[2]]);
    sum = K.add(sum, K.mul(c, v));
  }
  return sum;
}

ff::FieldElement evaluate(const FPoly& f, const geometry::ProjPoint& point) {
  return {point.field(), evaluate(f, *point.field(), point.codes())};
}

FPoly normalized(const FPoly& f) {
  if (f.is_zero()) return f;
  return f.scaled(f.ring().spec().inv(f.terms().begin()->second));
}

bool equal_up_to_scalar(const FPoly& f, const FPoly& g) {
  if (f.is_zero() || g.is_zero()) return false;
  return normalized(f) == normalized(g);
}

bool equal_up_to_scalar(const ZPoly& f, const ZPoly& g) {
  if (f.is_zero() || g.is_zero()) return false;
  return f.scaled(g.terms().begin()->second) == g.scaled(f.terms().begin()->second);
}

namespace {

template <class Poly, class CoeffToJson>
nlohmann::json poly_json(const Poly& f, CoeffToJson&& coeff) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : f.terms()) {
    terms.push_back({coeff(c), m.exps[0], m.exps[1], m.exps[2]});
  }
  return {{"degree", f.degree()}, {"ring", f.ring().name()}, {"terms", std::move(terms)}};
}

Monomial monomial_from(const nlohmann::json& t) {
  return {{t.at(1).get<unsigned>(), t.at(2).get<unsigned>(), t.at(3).get<unsigned>()}};
}

}  // namespace

nlohmann::json to_json(const ZPoly& f) {
  return poly_json(f, [](const BigInt& c) -> nlohmann::json {
    if (c >= std::numeric_limits<std::int64_t>::min() && c <= std::numeric_limits<std::int64_t>::max()) {
      return static_cast<std::int64_t>(c);
    }
    return c.str();
  });
}

nlohmann::json to_json(const FPoly& f) {
  return poly_json(f, [](Code c) -> nlohmann::json { return c; });
}

FPoly fpoly_from_json(const nlohmann::json& j) {
  const auto ring = j.at("ring").get<std::string>();
  unsigned long long p = 0;
  unsigned e = 0;
  if (std::sscanf(ring.c_str(), "GF(%llu,%u)", &p, &e) != 2) {
    throw ParameterError("unrecognized ring '" + ring + "'");
  }
  FPoly f(FieldRing(ff::field_create(p, e)), j.at("degree").get<unsigned>());
  for (const auto& t : j.at("terms")) f.add_term(monomial_from(t), t.at(0).get<Code>());
  return f;
}

ZPoly zpoly_from_json(const nlohmann::json& j) {
  if (j.at("ring") != "Z") throw ParameterError("expected ring Z");
  ZPoly f(IntegerRing{}, j.at("degree").get<unsigned>());
  for (const auto& t : j.at("terms")) {
    const auto& c = t.at(0);
    f.add_term(monomial_from(t), c.is_string() ? BigInt(c.get<std::string>()) : BigInt(c.get<std::int64_t>()));
  }
  return f;
}

}  // namespace bneg::poly
