#include <random>

#include "bneg/poly.hpp"
#include "doctest.h"

using namespace bneg;
using namespace bneg::poly;
using bneg::geometry::ProjPoint;
using ff::Code;

namespace {

BigInt eval_z(const ZPoly& f, const std::array<long, 3>& x) {
  BigInt sum = 0;
  for (const auto& [m, c] : f.terms()) {
    BigInt t = c;
    for (std::size_t i = 0; i < 3; ++i) {
      for (unsigned k = 0; k < m.exps[i]; ++k) t *= x[i];
    }
    sum += t;
  }
  return sum;
}

ZPoly random_zpoly(std::mt19937_64& rng, unsigned degree, int terms) {
  ZPoly f(IntegerRing{}, degree);
  for (int t = 0; t < terms; ++t) {
    const unsigned a = static_cast<unsigned>(rng() % (degree + 1));
    const unsigned b = static_cast<unsigned>(rng() % (degree - a + 1));
    f.add_term({{a, b, degree - a - b}}, static_cast<long>(rng() % 21) - 10);
  }
  return f;
}

FPoly random_fpoly(std::mt19937_64& rng, const ff::Field& field, unsigned degree, int terms) {
  FPoly f(FieldRing(field), degree);
  for (int t = 0; t < terms; ++t) {
    const unsigned a = static_cast<unsigned>(rng() % (degree + 1));
    const unsigned b = static_cast<unsigned>(rng() % (degree - a + 1));
    f.add_term({{a, b, degree - a - b}}, rng() % field->q());
  }
  return f;
}

ZPoly x_lin(long a0, long a1, long a2) { return ZPoly::linear(IntegerRing{}, a0, a1, a2); }

// f_2 over Z: x0^2+x1^2+x2^2-2x0x1-2x1x2-2x2x0
ZPoly worked_f2() {
  ZPoly f(IntegerRing{}, 2);
  f.add_term({{2, 0, 0}}, 1);
  f.add_term({{0, 2, 0}}, 1);
  f.add_term({{0, 0, 2}}, 1);
  f.add_term({{1, 1, 0}}, -2);
  f.add_term({{0, 1, 1}}, -2);
  f.add_term({{1, 0, 1}}, -2);
  return f;
}

}  // namespace

TEST_CASE("complete_homogeneous") {
  const IntegerRing zz;
  CHECK(complete_homogeneous(1, zz) == x_lin(1, 1, 1));
  auto g4 = complete_homogeneous(4, zz);
  CHECK(g4.size() == 15);
  for (const auto& [m, c] : g4.terms()) CHECK(c == 1);

  auto f3 = ff::field_create(3, 1);
  auto g2 = complete_homogeneous(2, FieldRing(f3));
  FPoly expected(FieldRing(f3), 2);
  for (Monomial m : {Monomial{{2, 0, 0}}, Monomial{{0, 2, 0}}, Monomial{{0, 0, 2}}, Monomial{{1, 1, 0}},
                     Monomial{{0, 1, 1}}, Monomial{{1, 0, 1}}}) {
    expected.add_term(m, 1);
  }
  CHECK(g2 == expected);
}

TEST_CASE("h_n and the generating-function identity") {
  const IntegerRing zz;
  CHECK(h_poly(1, zz).is_zero());

  // The defining sum equals minus the product (x2-x1)(x0-x2)(x1-x0).
  const ZPoly product = x_lin(0, -1, 1) * x_lin(1, 0, -1) * x_lin(-1, 1, 0);
  CHECK(h_poly(2, zz) == -product);
  CHECK_FALSE(h_poly(2, zz) == product);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    std::array<long, 3> x{static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 41) - 20,
                          static_cast<long>(rng() % 41) - 20};
    const BigInt h2 = (x[0] - x[1]) * (x[1] - x[2]) * (x[2] - x[0]);
    CHECK(eval_z(h_poly(2, zz), x) == h2);
    // h_n = h_2 g_{n-2} checked numerically, independent of the polynomial product.
    for (unsigned n = 3; n <= 12; ++n) {
      CHECK(eval_z(h_poly(n, zz), x) == h2 * eval_z(complete_homogeneous(n - 2, zz), x));
    }
  }

  CHECK(h_poly(3, zz) == h_poly(2, zz) * complete_homogeneous(1, zz));
  CHECK(check_h_identity(3));
  CHECK(check_h_identity(64));

  auto mutated = h_poly(7, zz);
  mutated.add_term({{1, 7, 0}}, -2);  // flips the sign of x0 x1^7
  CHECK_FALSE(h_identity_holds(mutated, 7));
  CHECK_THROWS_AS(check_h_identity(2), ParameterError);
}

TEST_CASE("norm_product examples") {
  SUBCASE("d = 1 is the line") {
    auto f5 = ff::field_create(5, 1);
    CHECK(norm_product(1, f5) == reduce(x_lin(1, 1, 1), f5));
  }
  SUBCASE("d = 2 reproduces the worked display") {
    CHECK(norm_product_integer(2) == worked_f2());
    CHECK(norm_product_integer(1) == x_lin(1, 1, 1));
    for (auto [p, e] : {std::pair{3u, 1u}, {5u, 1u}, {3u, 2u}, {7u, 1u}, {13u, 1u}}) {
      auto f = ff::field_create(p, e);
      CHECK(norm_product(2, f) == reduce(worked_f2(), ff::field_create(p, 1)));
    }
    // Mod 3 every coefficient becomes 1.
    auto f3 = ff::field_create(3, 1);
    CHECK(reduce(worked_f2(), f3) == complete_homogeneous(2, FieldRing(f3)));
  }
  SUBCASE("d = q - 1 is a multiple of g_{q-1}") {
    for (auto [p, e] : {std::pair{3u, 1u}, {2u, 2u}, {5u, 1u}, {2u, 3u}, {3u, 2u}, {7u, 1u}}) {
      auto f = ff::field_create(p, e);
      auto prime = ff::field_create(p, 1);
      const auto d = static_cast<unsigned>(f->q() - 1);
      CHECK(equal_up_to_scalar(norm_product(d, f), complete_homogeneous(d, FieldRing(prime))));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(norm_product(3, ff::field_create(5, 1)), ParameterError);
    CHECK_THROWS_AS(norm_product(0, ff::field_create(5, 1)), ParameterError);
    CHECK_THROWS_AS(norm_product(72, ff::field_create(73, 1)), ResourceError);
    CHECK_THROWS_AS(norm_product_integer(3), ParameterError);
  }
}

TEST_CASE("fast and literal norm expansions agree") {
  for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{
           {2, 2}, {2, 4}, {3, 2}, {5, 1}, {5, 2}, {7, 1}, {7, 2}, {13, 1}, {2, 6}}) {
    auto f = ff::field_create(p, e);
    const auto n = f->q() - 1;
    for (unsigned d = 1; d <= 8; ++d) {
      if (n % d) continue;
      CAPTURE(f->name());
      CAPTURE(d);
      auto fast = norm_product(d, f);
      CHECK(fast.degree() == d);
      CHECK(fast.ring().spec().is_prime_field());
      CHECK(fast == norm_product_direct(d, f));
    }
  }
}

TEST_CASE("moore determinant") {
  auto f2 = ff::field_create(2, 1);
  CHECK(moore_determinant(f2).degree() == 7);
  CHECK(moore_determinant(f2).size() == 6);
  for (auto [p, e] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}}) {
    auto f = ff::field_create(p, e);
    auto lines = rational_line_product(f);
    CHECK(lines.degree() == f->q() * f->q() + f->q() + 1);
    CHECK(equal_up_to_scalar(moore_determinant(f), lines));
  }
  SUBCASE("vanishes on points of rational lines over F_{q^3}") {
    auto base = ff::field_create(2, 1);
    auto big = ff::field_create(2, 3);
    auto det = moore_determinant(base);
    std::mt19937_64 rng(9);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      // Points on x0 + a1 x1 + a2 x2 = 0 with a in F_2, x1, x2 random in F_8.
      const Code a1 = rng() % 2, a2 = rng() % 2;
      const Code x1 = rng() % 8, x2 = rng() % 8;
      const Code x0 = big->add(big->mul(a1, x1), big->mul(a2, x2));
      if (x0 == 0 && x1 == 0 && x2 == 0) continue;
      CHECK(evaluate(det, ProjPoint(big, x0, x1, x2)).is_zero());
      ++checked;
    }
    CHECK(checked > 100);
    // A point of P^2(F_8) on no rational line: [1:t:t^2] has independent coordinates.
    CHECK_FALSE(evaluate(det, ProjPoint(big, 1, 2, 4)).is_zero());
  }
}

TEST_CASE("multiplicity_at") {
  auto f5 = ff::field_create(5, 1);
  FieldRing ring(f5);
  auto line = reduce(x_lin(1, 1, 1), f5);
  CHECK(multiplicity_at(line, ProjPoint(f5, 1, 4, 0)) == 1);
  CHECK(multiplicity_at(line, ProjPoint(f5, 1, 1, 1)) == 0);

  // Nodal cubic x1^2 x2 - x0^2 (x0 + x2).
  ZPoly nodal(IntegerRing{}, 3);
  nodal.add_term({{0, 2, 1}}, 1);
  nodal.add_term({{3, 0, 0}}, -1);
  nodal.add_term({{2, 0, 1}}, -1);
  CHECK(multiplicity_at(reduce(nodal, f5), ProjPoint(f5, 0, 0, 1)) == 2);
  // A smooth point of the same cubic: [x0:x1:1] with x1^2 = x0^2 (x0 + 1); x0 = 3 gives 36 = 1.
  CHECK(multiplicity_at(reduce(nodal, f5), ProjPoint(f5, 3, 1, 1)) == 1);

  CHECK_THROWS_AS(multiplicity_at(FPoly(ring, 2), ProjPoint(f5, 0, 0, 1)), ParameterError);
  CHECK_THROWS_AS(multiplicity_at(line, ProjPoint(f5, 1, 4, 0), 2), ParameterError);

  SUBCASE("prime-field polynomial at an extension point") {
    auto f25 = ff::field_create(5, 2);
    // g_4 over F_5 at points of GF(25).
    auto g = complete_homogeneous(4, ring);
    auto z = f25->root_of_unity(3);
    CHECK(multiplicity_at(g, ProjPoint(f25, z, 1, 1)) ==
          multiplicity_at(embed(g, f25), ProjPoint(f25, z, 1, 1)));
  }
  SUBCASE("chart independence") {
    std::mt19937_64 rng(13);
    auto f = ff::field_create(7, 1);
    for (int i = 0; i < 60; ++i) {
      // A polynomial with a known singular point: product of random lines
      // through P together with a random form.
      const ProjPoint P(f, rng() % 7, rng() % 7, 1);
      FPoly poly = random_fpoly(rng, f, 2, 4);
      if (poly.is_zero()) continue;
      for (int k = 0; k < 3; ++k) {
        // Line through P: pick a direction and use the cross product.
        const ProjPoint Q(f, rng() % 7, 1, rng() % 7);
        const auto& F = *f;
        const Code a0 = F.sub(F.mul(P.code(1), Q.code(2)), F.mul(P.code(2), Q.code(1)));
        const Code a1 = F.sub(F.mul(P.code(2), Q.code(0)), F.mul(P.code(0), Q.code(2)));
        const Code a2 = F.sub(F.mul(P.code(0), Q.code(1)), F.mul(P.code(1), Q.code(0)));
        if (a0 == 0 && a1 == 0 && a2 == 0) continue;
        poly = poly * FPoly::linear(FieldRing(f), a0, a1, a2);
      }
      const unsigned base = multiplicity_at(poly, P);
      CHECK(base >= 1);
      for (int chart = 0; chart < 3; ++chart) {
        if (P.code(chart) == 0) continue;
        CHECK(multiplicity_at(poly, P, chart) == base);
      }
    }
  }
}

TEST_CASE("partials") {
  auto f2 = ff::field_create(2, 1);
  auto sq = FPoly::monomial(FieldRing(f2), {{2, 0, 0}}, 1);
  CHECK(partials(sq)[0].is_zero());

  const IntegerRing zz;
  CHECK(partials(complete_homogeneous(2, zz))[0] == x_lin(2, 1, 1));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng() % 7);
    auto f = random_zpoly(rng, n, 8);
    if (f.is_zero()) continue;
    auto d = partials(f);
    ZPoly euler = x_lin(1, 0, 0) * d[0] + x_lin(0, 1, 0) * d[1] + x_lin(0, 0, 1) * d[2];
    CHECK(euler == f.scaled(n));

    auto fq = ff::field_create(5, 1);
    auto g = random_fpoly(rng, fq, n, 8);
    if (g.is_zero()) continue;
    auto dg = partials(g);
    FieldRing r(fq);
    FPoly e2 = FPoly::linear(r, 1, 0, 0) * dg[0] + FPoly::linear(r, 0, 1, 0) * dg[1] +
               FPoly::linear(r, 0, 0, 1) * dg[2];
    CHECK(e2 == g.scaled(fq->from_int(n)));
  }
}

TEST_CASE("ring axioms and grading") {
  std::mt19937_64 rng(19);
  auto f = ff::field_create(3, 2);
  for (int i = 0; i < 25; ++i) {
    auto a = random_zpoly(rng, 3, 6), b = random_zpoly(rng, 2, 5), c = random_zpoly(rng, 2, 5);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    if (!a.is_zero() && !b.is_zero()) CHECK((a * b).degree() == 5);

    auto x = random_fpoly(rng, f, 3, 6), y = random_fpoly(rng, f, 2, 5), z = random_fpoly(rng, f, 2, 5);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((x - x).is_zero());
    const auto xy = x * y;
    for (const auto& [m, _] : xy.terms()) CHECK(m.degree() == 5);
  }
  CHECK_THROWS_AS(random_zpoly(rng, 2, 3) + x_lin(1, 1, 1), ParameterError);
  auto g5 = ff::field_create(5, 1);
  CHECK_THROWS_AS(FPoly::linear(FieldRing(g5), 1, 1, 1) * FPoly::linear(FieldRing(f), 1, 1, 1), FieldMismatch);
}

TEST_CASE("serialization") {
  auto f3 = ff::field_create(3, 1);
  auto g2 = complete_homogeneous(2, FieldRing(f3));
  CHECK(to_text(g2) == "1 0 0 2\n1 0 1 1\n1 0 2 0\n1 1 0 1\n1 1 1 0\n1 2 0 0\n");
  auto j = to_json(g2);
  CHECK(j["ring"] == "GF(3,1)");
  CHECK(j["degree"] == 2);
  CHECK(j["terms"][0] == nlohmann::json({1, 0, 0, 2}));

  std::mt19937_64 rng(23);
  auto f9 = ff::field_create(3, 2);
  for (int i = 0; i < 20; ++i) {
    auto f = random_fpoly(rng, f9, 5, 10);
    CHECK(fpoly_from_json(to_json(f)) == f);
    auto z = random_zpoly(rng, 4, 8).scaled(BigInt("123456789012345678901234567890"));
    CHECK(zpoly_from_json(to_json(z)) == z);
  }
}
