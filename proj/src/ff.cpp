#include "bneg/ff.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "bneg/error.hpp"

namespace bneg::ff {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTableBound = u64{1} << 20;
constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 k, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (k) {
    if (k & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    k >>= 1;
  }
  return r;
}

// Dense polynomials over F_p, lowest degree first, trimmed.
using Poly = std::vector<u64>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, u64 p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 lead_inv = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    const u64 c = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
  }
  return poly_mod(std::move(r), m, p);
}

Poly poly_powmod(Poly base, u64 k, const Poly& m, u64 p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (k) {
    if (k & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    k >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: f of degree e is irreducible iff gcd(f, x^(p^k) - x) = 1 for
// 1 <= k <= e/2.
bool is_irreducible(const Poly& f, u64 p) {
  const std::size_t e = f.size() - 1;
  if (e <= 1) return e == 1;
  if (f[0] == 0) return false;
  Poly xpk{0, 1};
  for (std::size_t k = 1; k <= e / 2; ++k) {
    xpk = poly_powmod(xpk, p, f, p);
    Poly g = xpk;
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = (g[1] + p - 1) % p;
    trim(g);
    if (poly_gcd(f, g, p).size() != 1) return false;
  }
  return true;
}

Poly find_modulus(u64 p, unsigned e) {
  Poly f(e + 1, 0);
  f[e] = 1;
  if (e == 1) return f;
  // Counter over (c_0, ..., c_{e-1}) with c_0 most significant.  Candidates
  // with c_0 = 0 are divisible by x, so the search starts at c_0 = 1.
  f[0] = 1;
  while (true) {
    if (is_irreducible(f, p)) return f;
    unsigned i = e - 1;
    while (true) {
      if (++f[i] < p) break;
      f[i] = 0;
      if (i == 0) throw InternalError("no irreducible polynomial found");
      --i;
    }
  }
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 f = 2; f * f <= n; f += (f == 2 ? 1 : 2)) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 checked_pow(u64 n, u64 k) {
  u64 r = 1;
  for (u64 i = 0; i < k; ++i) {
    if (n != 0 && r > std::numeric_limits<u64>::max() / n) {
      throw ParameterError("integer power overflows 64 bits");
    }
    r *= n;
  }
  return r;
}

std::uint64_t binomial_mod(u64 n, u64 k, u64 p) {
  if (k > n) return 0;
  u64 result = 1;
  while (n || k) {
    const u64 ni = n % p;
    const u64 ki = k % p;
    if (ki > ni) return 0;
    // C(ni, ki) mod p with ni < p, computed directly.
    u64 num = 1;
    u64 den = 1;
    for (u64 i = 0; i < ki; ++i) {
      num = mulmod(num, ni - i, p);
      den = mulmod(den, i + 1, p);
    }
    result = mulmod(result, mulmod(num, powmod(den, p - 2, p), p), p);
    n /= p;
    k /= p;
  }
  return result;
}

// ---------------------------------------------------------------------------
// FieldSpec

Field FieldSpec::create(u64 p, unsigned e) {
  if (e == 0) throw ParameterError("extension degree must be positive");
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  checked_pow(p, e);  // q must fit in a 64-bit code
  return Field(new FieldSpec(p, e, find_modulus(p, e)));
}

Field field_create(u64 p, unsigned e) { return FieldSpec::create(p, e); }

FieldSpec::FieldSpec(u64 p, unsigned e, std::vector<u64> modulus)
    : p_(p), e_(e), q_(checked_pow(p, e)), modulus_(std::move(modulus)) {
  place_.resize(e_);
  place_[0] = 1;
  for (unsigned i = 1; i < e_; ++i) place_[i] = place_[i - 1] * p_;
  if (q_ <= kTableBound && q_ > 2) build_tables();
}

std::string FieldSpec::name() const {
  return "GF(" + std::to_string(p_) + "," + std::to_string(e_) + ")";
}

bool FieldSpec::same_as(const FieldSpec& o) const {
  return this == &o || (p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_);
}

Code FieldSpec::from_int(std::int64_t v) const {
  const auto pi = static_cast<__int128>(p_);
  __int128 r = static_cast<__int128>(v) % pi;
  if (r < 0) r += pi;
  return static_cast<u64>(r);
}

Code FieldSpec::from_digits(std::span<const u64> digits) const {
  if (digits.size() > e_) throw ParameterError("too many coefficients for " + name());
  Code c = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= p_) throw ParameterError("coefficient out of range [0, p)");
    c += digits[i] * place_[i];
  }
  return c;
}

std::vector<u64> FieldSpec::digits(Code c) const {
  std::vector<u64> d(e_);
  for (unsigned i = 0; i < e_; ++i) {
    d[i] = c % p_;
    c /= p_;
  }
  return d;
}

Code FieldSpec::add_digits(Code a, Code b) const {
  if (e_ == 1) {
    const u64 s = a + b;
    return (s >= p_ || s < a) ? s - p_ : s;
  }
  Code r = 0;
  for (unsigned i = 0; i < e_; ++i) {
    u64 s = a % p_ + b % p_;
    if (s >= p_) s -= p_;
    r += s * place_[i];
    a /= p_;
    b /= p_;
  }
  return r;
}

Code FieldSpec::neg_digits(Code a) const {
  Code r = 0;
  for (unsigned i = 0; i < e_; ++i) {
    const u64 d = a % p_;
    r += (d == 0 ? 0 : p_ - d) * place_[i];
    a /= p_;
  }
  return r;
}

Code FieldSpec::add(Code a, Code b) const {
  if (p_ == 2) return a ^ b;
  if (e_ == 1 || zech_.empty()) return add_digits(a, b);
  if (a == 0) return b;
  if (b == 0) return a;
  const std::uint32_t la = log_[a];
  const std::uint32_t lb = log_[b];
  const u64 n = q_ - 1;
  const u64 k = lb >= la ? lb - la : lb + n - la;
  const std::uint32_t z = zech_[k];
  if (z == kNoLog) return 0;
  return exp_[la + z];
}

Code FieldSpec::neg(Code a) const {
  if (p_ == 2 || a == 0) return a;
  if (e_ == 1) return p_ - a;
  if (!exp_.empty()) return exp_[log_[a] + (q_ - 1) / 2];
  return neg_digits(a);
}

Code FieldSpec::mul_generic(Code a, Code b) const {
  if (e_ == 1) return mulmod(a, b, p_);
  if (a == 0 || b == 0) return 0;
  const auto da = digits(a);
  const auto db = digits(b);
  std::vector<u64> prod(2 * e_ - 1, 0);
  for (unsigned i = 0; i < e_; ++i) {
    if (da[i] == 0) continue;
    for (unsigned j = 0; j < e_; ++j) {
      prod[i + j] = (prod[i + j] + mulmod(da[i], db[j], p_)) % p_;
    }
  }
  // Reduce with the monic modulus from the top.
  for (std::size_t k = prod.size(); k-- > e_;) {
    const u64 c = prod[k];
    if (c == 0) continue;
    for (unsigned i = 0; i < e_; ++i) {
      prod[k - e_ + i] = (prod[k - e_ + i] + p_ - mulmod(c, modulus_[i], p_)) % p_;
    }
    prod[k] = 0;
  }
  return from_digits(std::span<const u64>(prod.data(), e_));
}

Code FieldSpec::mul(Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) return exp_[log_[a] + log_[b]];
  return mul_generic(a, b);
}

Code FieldSpec::pow_generic(Code a, u64 k) const {
  Code r = 1;
  while (k) {
    if (k & 1) r = mul_generic(r, a);
    a = mul_generic(a, a);
    k >>= 1;
  }
  return r;
}

Code FieldSpec::pow(Code a, u64 k) const {
  if (k == 0) return 1;
  if (a == 0) return 0;
  if (!exp_.empty()) {
    const u64 n = q_ - 1;
    return exp_[static_cast<u64>(static_cast<u128>(log_[a]) * (k % n) % n)];
  }
  if (e_ == 1) return powmod(a, k, p_);
  return pow_generic(a, k % (q_ - 1));
}

Code FieldSpec::inv(Code a) const {
  if (a == 0) throw std::domain_error("inverse of zero in " + name());
  if (!exp_.empty()) {
    const u64 n = q_ - 1;
    return exp_[log_[a] == 0 ? 0 : n - log_[a]];
  }
  return pow(a, q_ - 2);
}

Code FieldSpec::frobenius(Code a, u64 k) const {
  k %= e_;
  if (k == 0) return a;
  return pow(a, place_[k]);
}

Code FieldSpec::find_generator() const {
  if (q_ == 2) return 1;
  const u64 n = q_ - 1;
  const auto factors = prime_factors(n);
  for (Code g = 2; g < q_; ++g) {
    bool ok = true;
    for (u64 l : factors) {
      if (pow_generic(g, n / l) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw InternalError("multiplicative group has no generator");
}

void FieldSpec::build_tables() {
  generator_ = find_generator();
  std::call_once(generator_once_, [] {});
  const u64 n = q_ - 1;
  exp_.assign(2 * n, 0);
  log_.assign(q_, kNoLog);
  Code x = 1;
  for (u64 i = 0; i < n; ++i) {
    exp_[i] = static_cast<std::uint32_t>(x);
    exp_[i + n] = static_cast<std::uint32_t>(x);
    log_[x] = static_cast<std::uint32_t>(i);
    x = mul_generic(x, generator_);
  }
  if (x != 1) throw InternalError("generator does not close its orbit");
  if (e_ > 1 && p_ != 2) {
    zech_.assign(n, kNoLog);
    for (u64 k = 0; k < n; ++k) {
      const Code s = add_digits(1, exp_[k]);
      zech_[k] = s == 0 ? kNoLog : log_[s];
    }
  }
}

Code FieldSpec::generator() const {
  std::call_once(generator_once_, [this] { generator_ = find_generator(); });
  return generator_;
}

Code FieldSpec::root_of_unity(u64 d) const {
  if (d == 0 || (q_ - 1) % d != 0) {
    throw ParameterError(std::to_string(d) + " does not divide q - 1 = " + std::to_string(q_ - 1));
  }
  return pow(generator(), (q_ - 1) / d);
}

u64 FieldSpec::order(Code a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative order");
  u64 n = q_ - 1;
  for (u64 l : prime_factors(n)) {
    while (n % l == 0 && pow(a, n / l) == 1) n /= l;
  }
  return n;
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(Field field, Code code) : field_(std::move(field)), code_(code) {
  if (!field_) throw ParameterError("field element without a field");
  if (code_ >= field_->q()) throw ParameterError("element code out of range for " + field_->name());
}

FieldElement FieldElement::from_int(Field field, std::int64_t v) {
  const Code c = field->from_int(v);
  return {std::move(field), c};
}

FieldElement FieldElement::from_coeffs(Field field, std::span<const u64> coeffs) {
  const Code c = field->from_digits(coeffs);
  return {std::move(field), c};
}

void FieldElement::require_same_field(const FieldElement& o) const {
  if (!field_->same_as(*o.field_)) {
    throw FieldMismatch("arithmetic between " + field_->name() + " and " + o.field_->name());
  }
}

FieldElement FieldElement::operator-() const { return {field_, field_->neg(code_)}; }

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  require_same_field(o);
  code_ = field_->add(code_, o.code_);
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  require_same_field(o);
  code_ = field_->sub(code_, o.code_);
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  require_same_field(o);
  code_ = field_->mul(code_, o.code_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  require_same_field(o);
  code_ = field_->mul(code_, field_->inv(o.code_));
  return *this;
}

bool FieldElement::operator==(const FieldElement& o) const {
  require_same_field(o);
  return code_ == o.code_;
}

FieldElement FieldElement::pow(u64 k) const { return {field_, field_->pow(code_, k)}; }

FieldElement FieldElement::inverse() const { return {field_, field_->inv(code_)}; }

std::string FieldElement::to_string() const {
  std::ostringstream os;
  os << '[';
  const auto c = coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ',';
    os << c[i];
  }
  os << ']';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.to_string(); }

FieldElement root_of_unity(const Field& field, u64 d) { return {field, field->root_of_unity(d)}; }

FieldElement frobenius(const FieldElement& x, u64 k) {
  return {x.field(), x.spec().frobenius(x.code(), k)};
}

ElementRange enumerate_field(const Field& field, u64 bound) {
  if (field->q() > bound) {
    throw ResourceError("enumerating " + field->name() + " exceeds the bound " + std::to_string(bound));
  }
  return ElementRange(field);
}

}  // namespace bneg::ff
