#pragma once

// Exact arithmetic in finite fields GF(p^e).
//
// A field is represented as F_p[t]/(f(t)) for a monic irreducible f of degree
// e, chosen deterministically (see FieldSpec::create).  Elements are encoded
// as integers code = c_0 + c_1 p + ... + c_{e-1} p^{e-1}, where c_i is the
// coefficient of t^i; the prime subfield therefore occupies codes [0, p).
//
// FieldSpec owns the arithmetic on codes, which is what the heavy kernels use.
// FieldElement pairs a code with its field and refuses to mix fields.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace bneg::ff {

using Code = std::uint64_t;

inline constexpr std::uint64_t kDefaultEnumerationBound = std::uint64_t{1} << 20;

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Distinct prime factors of n by trial division, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// n^k, throwing ParameterError on 64-bit overflow.
std::uint64_t checked_pow(std::uint64_t n, std::uint64_t k);

class FieldSpec;
using Field = std::shared_ptr<const FieldSpec>;

class FieldSpec {
 public:
  /// Builds GF(p^e).  The modulus is the first monic irreducible polynomial
  /// of degree e in the order that compares the constant coefficient first,
  /// then the linear coefficient, and so on.  For e = 1 this is x.
  static Field create(std::uint64_t p, unsigned e);

  std::uint64_t p() const { return p_; }
  unsigned e() const { return e_; }
  std::uint64_t q() const { return q_; }
  bool is_prime_field() const { return e_ == 1; }
  /// Monic modulus, low degree first; size e + 1 with a trailing 1.
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }
  /// "GF(p,e)"
  std::string name() const;

  bool same_as(const FieldSpec& other) const;

  Code zero() const { return 0; }
  Code one() const { return 1; }
  /// Image of an integer under Z -> F_p -> GF(p^e).
  Code from_int(std::int64_t v) const;
  Code from_digits(std::span<const std::uint64_t> digits) const;
  std::vector<std::uint64_t> digits(Code c) const;
  bool in_prime_field(Code c) const { return c < p_; }

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const { return add(a, neg(b)); }
  Code neg(Code a) const;
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;
  Code pow(Code a, std::uint64_t k) const;
  /// a^(p^k)
  Code frobenius(Code a, std::uint64_t k) const;

  /// Smallest code of multiplicative order q - 1.
  Code generator() const;
  /// generator^((q-1)/d); throws unless d divides q - 1.
  Code root_of_unity(std::uint64_t d) const;
  /// Multiplicative order of a nonzero element.
  std::uint64_t order(Code a) const;

  bool has_tables() const { return !exp_.empty(); }

 private:
  FieldSpec(std::uint64_t p, unsigned e, std::vector<std::uint64_t> modulus);

  Code mul_generic(Code a, Code b) const;
  Code add_digits(Code a, Code b) const;
  Code neg_digits(Code a) const;
  Code pow_generic(Code a, std::uint64_t k) const;
  Code find_generator() const;
  void build_tables();

  std::uint64_t p_;
  unsigned e_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
  std::vector<std::uint64_t> place_;  // p^i

  // Log/antilog tables for q up to kTableBound; exp_ is doubled so that
  // exp_[log a + log b] needs no reduction.  zech_[k] = log(1 + g^k).
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;

  mutable std::once_flag generator_once_;
  mutable Code generator_ = 0;
};

/// field_create: GF(p^e) with the deterministic modulus.
Field field_create(std::uint64_t p, unsigned e);

class FieldElement {
 public:
  FieldElement(Field field, Code code);
  static FieldElement zero(Field field) { return {std::move(field), 0}; }
  static FieldElement one(Field field) { return {std::move(field), 1}; }
  static FieldElement from_int(Field field, std::int64_t v);
  static FieldElement from_coeffs(Field field, std::span<const std::uint64_t> coeffs);

  const Field& field() const { return field_; }
  const FieldSpec& spec() const { return *field_; }
  Code code() const { return code_; }
  /// Coefficients in the basis 1, t, ..., t^(e-1).
  std::vector<std::uint64_t> coeffs() const { return field_->digits(code_); }
  bool is_zero() const { return code_ == 0; }
  bool is_one() const { return code_ == 1; }

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  /// Equality requires the same field; comparing across fields throws.
  bool operator==(const FieldElement& o) const;

  FieldElement pow(std::uint64_t k) const;
  FieldElement inverse() const;

  /// "[c0,c1,...]"
  std::string to_string() const;

 private:
  void require_same_field(const FieldElement& o) const;

  Field field_;
  Code code_;
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

/// Element of exact multiplicative order d.
FieldElement root_of_unity(const Field& field, std::uint64_t d);

/// x^(p^k)
FieldElement frobenius(const FieldElement& x, std::uint64_t k);

/// Restartable range over all q elements in code order.
class ElementRange {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = FieldElement;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const Field* field, Code code) : field_(field), code_(code) {}
    FieldElement operator*() const { return {*field_, code_}; }
    iterator& operator++() {
      ++code_;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++code_;
      return old;
    }
    bool operator==(const iterator& o) const { return code_ == o.code_; }

   private:
    const Field* field_ = nullptr;
    Code code_ = 0;
  };

  explicit ElementRange(Field field) : field_(std::move(field)) {}
  iterator begin() const { return {&field_, 0}; }
  iterator end() const { return {&field_, field_->q()}; }
  std::uint64_t size() const { return field_->q(); }

 private:
  Field field_;
};

/// enumerate_field: throws ResourceError when q exceeds `bound`.
ElementRange enumerate_field(const Field& field,
                             std::uint64_t bound = kDefaultEnumerationBound);

/// Binomial coefficient C(n, k) reduced mod a prime p (Lucas).
std::uint64_t binomial_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p);

}  // namespace bneg::ff
