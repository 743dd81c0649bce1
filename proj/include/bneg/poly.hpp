#pragma once

// Sparse homogeneous polynomials in x0, x1, x2 over Z or over GF(p^e).
//
// Terms are kept in a std::map keyed by exponent triples, so iteration is in
// ascending lexicographic order of (n0, n1, n2) and every printed form is
// canonical.  Products go through a dense accumulator indexed by (n1, n2),
// which homogeneity makes sufficient.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include "json.hpp"

#include "bneg/error.hpp"
#include "bneg/ff.hpp"
#include "bneg/point.hpp"

namespace bneg::poly {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr unsigned kDefaultNormDegreeBound = 64;

struct Monomial {
  std::array<unsigned, 3> exps{};

  unsigned degree() const { return exps[0] + exps[1] + exps[2]; }
  auto operator<=>(const Monomial&) const = default;
};

class IntegerRing {
 public:
  using value_type = BigInt;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return v; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  bool is_zero(const value_type& a) const { return a == 0; }
  std::uint64_t characteristic() const { return 0; }
  std::string name() const { return "Z"; }
  std::string format(const value_type& a) const { return a.str(); }
  bool operator==(const IntegerRing&) const { return true; }
};

class FieldRing {
 public:
  using value_type = ff::Code;

  explicit FieldRing(ff::Field field) : field_(std::move(field)) {}

  const ff::Field& field() const { return field_; }
  const ff::FieldSpec& spec() const { return *field_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return field_->from_int(v); }
  value_type add(value_type a, value_type b) const { return field_->add(a, b); }
  value_type sub(value_type a, value_type b) const { return field_->sub(a, b); }
  value_type neg(value_type a) const { return field_->neg(a); }
  value_type mul(value_type a, value_type b) const { return field_->mul(a, b); }
  bool is_zero(value_type a) const { return a == 0; }
  std::uint64_t characteristic() const { return field_->p(); }
  std::string name() const { return field_->name(); }
  std::string format(value_type a) const { return std::to_string(a); }
  bool operator==(const FieldRing& o) const { return field_->same_as(*o.field_); }

 private:
  ff::Field field_;
};

template <class Ring>
class HomogPoly {
 public:
  using Coeff = typename Ring::value_type;
  using Terms = std::map<Monomial, Coeff>;

  HomogPoly(Ring ring, unsigned degree) : ring_(std::move(ring)), degree_(degree) {}

  static HomogPoly monomial(Ring ring, Monomial m, Coeff c) {
    HomogPoly f(std::move(ring), m.degree());
    f.add_term(m, std::move(c));
    return f;
  }

  /// a0 x0 + a1 x1 + a2 x2
  static HomogPoly linear(Ring ring, const Coeff& a0, const Coeff& a1, const Coeff& a2) {
    HomogPoly f(std::move(ring), 1);
    f.add_term({{1, 0, 0}}, a0);
    f.add_term({{0, 1, 0}}, a1);
    f.add_term({{0, 0, 1}}, a2);
    return f;
  }

  const Ring& ring() const { return ring_; }
  unsigned degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Coeff coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.zero() : it->second;
  }

  /// Accumulates c into the coefficient of m; zero results are erased.
  void add_term(const Monomial& m, const Coeff& c) {
    if (m.degree() != degree_) {
      throw ParameterError("monomial degree " + std::to_string(m.degree()) +
                           " in a polynomial of degree " + std::to_string(degree_));
    }
    if (ring_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = ring_.add(it->second, c);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
  }

  HomogPoly& operator+=(const HomogPoly& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  HomogPoly& operator-=(const HomogPoly& o) {
    require_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, ring_.neg(c));
    return *this;
  }

  HomogPoly operator-() const {
    HomogPoly r(ring_, degree_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, ring_.neg(c));
    return r;
  }

  friend HomogPoly operator+(HomogPoly a, const HomogPoly& b) { return a += b; }
  friend HomogPoly operator-(HomogPoly a, const HomogPoly& b) { return a -= b; }

  friend HomogPoly operator*(const HomogPoly& a, const HomogPoly& b) {
    if (!(a.ring_ == b.ring_)) throw FieldMismatch("multiplying polynomials over different rings");
    const unsigned n = a.degree_ + b.degree_;
    HomogPoly r(a.ring_, n);
    if (a.is_zero() || b.is_zero()) return r;
    const std::size_t width = n + 1;
    std::vector<Coeff> acc(width * width, a.ring_.zero());
    std::vector<char> touched(width * width, 0);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        const std::size_t idx = (ma.exps[1] + mb.exps[1]) * width + (ma.exps[2] + mb.exps[2]);
        acc[idx] = a.ring_.add(acc[idx], a.ring_.mul(ca, cb));
        touched[idx] = 1;
      }
    }
    for (unsigned n1 = 0; n1 <= n; ++n1) {
      for (unsigned n2 = 0; n1 + n2 <= n; ++n2) {
        const std::size_t idx = n1 * width + n2;
        if (touched[idx] && !a.ring_.is_zero(acc[idx])) {
          r.terms_.emplace(Monomial{{n - n1 - n2, n1, n2}}, std::move(acc[idx]));
        }
      }
    }
    return r;
  }

  HomogPoly scaled(const Coeff& s) const {
    HomogPoly r(ring_, degree_);
    for (const auto& [m, c] : terms_) {
      auto v = ring_.mul(c, s);
      if (!ring_.is_zero(v)) r.terms_.emplace(m, std::move(v));
    }
    return r;
  }

  /// Exact equality; degrees must match unless both are zero.
  bool operator==(const HomogPoly& o) const {
    if (!(ring_ == o.ring_)) return false;
    if (is_zero() && o.is_zero()) return true;
    return degree_ == o.degree_ && terms_ == o.terms_;
  }

 private:
  void require_compatible(const HomogPoly& o) {
    if (!(ring_ == o.ring_)) throw FieldMismatch("adding polynomials over different rings");
    if (is_zero() && !o.is_zero()) degree_ = o.degree_;
    if (degree_ != o.degree_ && !o.is_zero()) {
      throw ParameterError("adding polynomials of degrees " + std::to_string(degree_) + " and " +
                           std::to_string(o.degree_));
    }
  }

  Ring ring_;
  unsigned degree_;
  Terms terms_;
};

using ZPoly = HomogPoly<IntegerRing>;
using FPoly = HomogPoly<FieldRing>;

// ---------------------------------------------------------------------------
// Families

/// g_n: every monomial of degree n with coefficient 1.
template <class Ring>
HomogPoly<Ring> complete_homogeneous(unsigned n, const Ring& ring) {
  HomogPoly<Ring> g(ring, n);
  for (unsigned a = 0; a <= n; ++a) {
    for (unsigned b = 0; a + b <= n; ++b) g.add_term({{a, b, n - a - b}}, ring.one());
  }
  return g;
}

/// h_n = x0 x1^n - x0^n x1 + x1 x2^n - x1^n x2 + x2 x0^n - x2^n x0.
template <class Ring>
HomogPoly<Ring> h_poly(unsigned n, const Ring& ring) {
  if (n < 1) throw ParameterError("h_n needs n >= 1");
  HomogPoly<Ring> h(ring, n + 1);
  const auto one = ring.one();
  const auto minus = ring.neg(one);
  h.add_term({{1, n, 0}}, one);
  h.add_term({{n, 1, 0}}, minus);
  h.add_term({{0, 1, n}}, one);
  h.add_term({{0, n, 1}}, minus);
  h.add_term({{n, 0, 1}}, one);
  h.add_term({{1, 0, n}}, minus);
  return h;
}

/// True iff h_n - h_2 g_{n-2} vanishes for the supplied h_n.
bool h_identity_holds(const ZPoly& h_n, unsigned n);

/// check_h_identity: h_n = h_2 g_{n-2} over Z for every 3 <= n <= n_max.
bool check_h_identity(unsigned n_max);

/// Image of an integer polynomial in F[x0, x1, x2].
FPoly reduce(const ZPoly& f, const ff::Field& field);

/// The same polynomial with prime-field coefficients viewed in an extension
/// of characteristic p.
FPoly embed(const FPoly& f, const ff::Field& target);

/// f_d = prod over zeta, zeta' in mu_d of (x0^(1/d) + zeta x1^(1/d) + zeta' x2^(1/d)),
/// returned over the prime field F_p.  Requires d | q - 1.
///
/// The inner product over zeta collapses to (u0 + zeta' u2)^d - (-1)^d x1, so
/// the expansion runs in F_q[s][x1] with s = u2/u0; every power of s that
/// survives must be a multiple of d and every coefficient must lie in F_p,
/// otherwise InternalError is thrown.
FPoly norm_product(unsigned d, const ff::Field& field,
                   unsigned max_degree = kDefaultNormDegreeBound);

/// Same polynomial computed literally: the d^2 linear forms in the d-th roots
/// u_i, multiplied out, then exponents divided by d.  Only practical for
/// small d; used to cross-check norm_product.
FPoly norm_product_direct(unsigned d, const ff::Field& field);

/// f_d over Z; mu_d lies in Z only for d = 1, 2.
ZPoly norm_product_integer(unsigned d);

/// Moore determinant det(x_i, x_i^q, x_i^(q^2)), six terms of degree q^2+q+1.
FPoly moore_determinant(const ff::Field& field);

/// Product of the q^2+q+1 linear forms a0 x0 + a1 x1 + a2 x2 over the dual
/// plane of F_q.
FPoly rational_line_product(const ff::Field& field);

/// Dehomogenizes at the last nonzero coordinate of P and returns the order of
/// vanishing there.  f may live over P's field or over its prime field.
unsigned multiplicity_at(const FPoly& f, const geometry::ProjPoint& point);
/// As above with an explicit chart index (the coordinate set to 1).
unsigned multiplicity_at(const FPoly& f, const geometry::ProjPoint& point, int chart);

/// Value of f at the given coordinates (in P's field); f may be over the
/// prime subfield.
ff::Code evaluate(const FPoly& f, const ff::FieldSpec& field, const std::array<ff::Code, 3>& x);
ff::FieldElement evaluate(const FPoly& f, const geometry::ProjPoint& point);

template <class Ring>
std::array<HomogPoly<Ring>, 3> partials(const HomogPoly<Ring>& f) {
  const unsigned n = f.degree() == 0 ? 0 : f.degree() - 1;
  std::array<HomogPoly<Ring>, 3> out{HomogPoly<Ring>(f.ring(), n), HomogPoly<Ring>(f.ring(), n),
                                     HomogPoly<Ring>(f.ring(), n)};
  const auto& ring = f.ring();
  for (const auto& [m, c] : f.terms()) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (m.exps[i] == 0) continue;
      Monomial dm = m;
      --dm.exps[i];
      std::uint64_t k = m.exps[i];
      if (ring.characteristic() != 0) k %= ring.characteristic();
      out[i].add_term(dm, ring.mul(c, ring.from_int(static_cast<std::int64_t>(k))));
    }
  }
  return out;
}

/// Scales f so the coefficient of its lexicographically first monomial is 1.
FPoly normalized(const FPoly& f);

/// f = c g for a nonzero scalar c (both nonzero).
bool equal_up_to_scalar(const FPoly& f, const FPoly& g);
bool equal_up_to_scalar(const ZPoly& f, const ZPoly& g);

// ---------------------------------------------------------------------------
// Serialization

/// One term per line: "<coefficient> <n0> <n1> <n2>".
template <class Ring>
std::string to_text(const HomogPoly<Ring>& f) {
  std::string out;
  for (const auto& [m, c] : f.terms()) {
    out += f.ring().format(c);
    for (unsigned e : m.exps) out += ' ' + std::to_string(e);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const ZPoly& f);
nlohmann::json to_json(const FPoly& f);
FPoly fpoly_from_json(const nlohmann::json& j);
ZPoly zpoly_from_json(const nlohmann::json& j);

}  // namespace bneg::poly
