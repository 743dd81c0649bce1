#include "bneg/surface.hpp"

#include <algorithm>
#include <array>

#include "bneg/error.hpp"
#include "bneg/geometry.hpp"

namespace bneg::surface {

using ff::Code;
using geometry::ProjPoint;
using Coords = std::array<Code, 3>;

std::string BiPoint::to_string() const { return "(" + x.to_string() + "," + y.to_string() + ")"; }

namespace {

Code fermat_form(const ff::FieldSpec& K, std::uint64_t n, const Coords& y) {
  return K.add(K.add(K.pow(y[0], n), K.pow(y[1], n)), K.pow(y[2], n));
}

Code second_form(const ff::FieldSpec& K, unsigned m, std::uint64_t r, const Coords& x, const Coords& y) {
  Code s = 0;
  for (std::size_t i = 0; i < 3; ++i) s = K.add(s, K.mul(K.pow(x[i], m), K.pow(y[i], r)));
  return s;
}

// A coordinate point e_i with y_i != 0: the second equation becomes y_i^r != 0.
Coords off_surface_x(const Coords& y) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (y[i] != 0) {
      Coords x{0, 0, 0};
      x[i] = 1;
      return x;
    }
  }
  throw InternalError("zero y coordinates");
}

std::vector<Coords> fermat_points(const ff::FieldSpec& K, std::uint64_t n, const std::vector<Coords>& plane) {
  std::vector<Coords> out;
  for (const auto& y : plane) {
    if (fermat_form(K, n, y) == 0) out.push_back(y);
  }
  return out;
}

BiPoint make_bipoint(const ff::Field& field, const Coords& x, const Coords& y) {
  return {ProjPoint(field, x[0], x[1], x[2]), ProjPoint(field, y[0], y[1], y[2])};
}

}  // namespace

bool on_surface(const SurfaceSpec& s, const BiPoint& point) {
  const auto& K = *point.x.field();
  if (!K.same_as(*point.y.field())) throw FieldMismatch("bipoint coordinates in different fields");
  return fermat_form(K, s.n, point.y.codes()) == 0 &&
         second_form(K, s.m, s.r, point.x.codes(), point.y.codes()) == 0;
}

std::vector<BiPoint> enumerate_surface(const SurfaceSpec& s, const ff::Field& field, std::uint64_t bound) {
  const auto& K = *field;
  const auto plane = geometry::enumerate_plane(K, bound);
  std::vector<Coords> xm(plane.size());
  for (std::size_t k = 0; k < plane.size(); ++k) {
    for (std::size_t i = 0; i < 3; ++i) xm[k][i] = K.pow(plane[k][i], s.m);
  }
  std::vector<BiPoint> out;
  for (const auto& y : fermat_points(K, s.n, plane)) {
    const Coords yr{K.pow(y[0], s.r), K.pow(y[1], s.r), K.pow(y[2], s.r)};
    for (std::size_t k = 0; k < plane.size(); ++k) {
      Code v = 0;
      for (std::size_t i = 0; i < 3; ++i) v = K.add(v, K.mul(xm[k][i], yr[i]));
      if (v == 0) out.push_back(make_bipoint(field, plane[k], y));
    }
  }
  return out;
}

CheckRecord verify_blowup_model(unsigned m, const ff::Field& field, std::uint64_t bound, bool fault) {
  const auto& K = *field;
  CheckRecord rec("blowup_model", {{"m", m}, {"field", K.name()}});
  const auto plane = geometry::enumerate_plane(K, bound);
  std::uint64_t ci_points = 0, line_fibres = 0, point_fibres = 0;
  for (const auto& x : plane) {
    const Coords xm{K.pow(x[0], m), K.pow(x[1], m), K.pow(x[2], m)};
    const Coords s{K.sub(xm[1], xm[2]), K.sub(xm[2], xm[0]), K.sub(xm[0], xm[1])};
    const bool on_z = s[0] == 0 && s[1] == 0 && s[2] == 0;
    std::uint64_t fibre = 0;
    for (const auto& y : plane) {
      const bool three = K.mul(y[0], s[1]) == K.mul(y[1], s[0]) && K.mul(y[1], s[2]) == K.mul(y[2], s[1]) &&
                         K.mul(y[2], s[0]) == K.mul(y[0], s[2]);
      const bool lin = K.add(K.add(y[0], y[1]), y[2]) == 0;
      Code sum = 0;
      for (std::size_t i = 0; i < 3; ++i) sum = K.add(sum, K.mul(xm[i], y[i]));
      const bool ci = lin && sum == 0;
      const bool model = three && (fault || lin);
      if (model != ci) rec.fail({{"x", ProjPoint(field, x[0], x[1], x[2]).to_string()},
                                 {"y", ProjPoint(field, y[0], y[1], y[2]).to_string()},
                                 {"reason", "2x2 locus differs from the complete intersection"}});
      if (!on_z && three && !lin) rec.fail({{"x", ProjPoint(field, x[0], x[1], x[2]).to_string()},
                                            {"reason", "2x2 equations off Z without y0+y1+y2=0"}});
      if (ci) ++fibre;
    }
    ci_points += fibre;
    const std::uint64_t want = on_z ? K.q() + 1 : 1;
    if (fibre != want) {
      rec.fail({{"x", ProjPoint(field, x[0], x[1], x[2]).to_string()}, {"fibre", fibre}, {"expected", want}});
    }
    (on_z ? line_fibres : point_fibres) += 1;
  }
  rec.detail = {{"points", ci_points}, {"line_fibres", line_fibres}, {"point_fibres", point_fibres}};
  return rec;
}

namespace {

// Visits C_1(F_{q^t}) for t = 1, 2, ... while q^t <= bound.
template <class Visit>
nlohmann::json for_each_lift_field(const geometry::Triple& t, std::uint64_t bound, Visit&& visit) {
  if (t.q > bound) {
    throw ResourceError("C_1 over " + t.field->name() + " exceeds the bound " + std::to_string(bound));
  }
  nlohmann::json fields = nlohmann::json::array();
  std::uint64_t size = t.q;
  for (unsigned ext = 1; size <= bound; ++ext) {
    const auto L = ff::field_create(t.p, t.e * ext);
    std::uint64_t n = 0;
    for (const auto& P : geometry::enumerate_C1(L, bound)) {
      if (!visit(P)) return fields;
      ++n;
    }
    fields.push_back({{"field", L->name()}, {"points", n}});
    if (size > bound / t.q) break;
    size *= t.q;
  }
  return fields;
}

}  // namespace

CheckRecord verify_lift(std::uint64_t p, unsigned m, unsigned e, std::uint64_t bound, bool fault) {
  const auto t = geometry::make_triple(p, m, e);
  CheckRecord rec("lift", t.to_json());
  const auto R = SurfaceSpec::R(m);
  bool first = true;
  rec.detail["fields"] = for_each_lift_field(t, bound, [&](const ProjPoint& P) {
    auto x = geometry::apply_param({t.d, {1, 1, 1}}, P);
    if (fault && first) {
      const auto c = off_surface_x(P.codes());
      x = ProjPoint(P.field(), c[0], c[1], c[2]);
    }
    first = false;
    const BiPoint img{x, P};
    if (!on_surface(R, img)) rec.fail(img.to_string());
    return true;
  });
  return rec;
}

std::optional<BiPoint> lift_witness(std::uint64_t p, unsigned m, unsigned e, std::uint64_t k, std::uint64_t bound) {
  const auto t = geometry::make_triple(p, m, e);
  const auto R = SurfaceSpec::R(m);
  std::optional<BiPoint> found;
  for_each_lift_field(t, bound, [&](const ProjPoint& P) {
    const BiPoint img{geometry::apply_param({k, {1, 1, 1}}, P), P};
    if (!on_surface(R, img)) found = img;
    return !found;
  });
  return found;
}

std::int64_t canonical_pairing(unsigned /*m*/, std::int64_t a, std::int64_t b, std::uint64_t d) {
  return static_cast<std::int64_t>(d) * a + b;
}

std::int64_t adjunction_self_intersection(unsigned m, std::uint64_t d) {
  return -2 - canonical_pairing(m, static_cast<std::int64_t>(m) - 3, -1, d);
}

namespace {

// psi_a, with negative exponents cleared by (y0 y1 y2)^|a|.  nullopt where
// every image coordinate vanishes.
std::optional<BiPoint> psi(std::int64_t a, const BiPoint& P) {
  const auto& field = P.x.field();
  const auto& K = *field;
  const auto& x = P.x.codes();
  const auto& y = P.y.codes();
  Coords out{};
  const auto k = static_cast<std::uint64_t>(a < 0 ? -a : a);
  for (std::size_t i = 0; i < 3; ++i) {
    Code f = 1;
    if (a >= 0) {
      f = K.pow(y[i], k);
    } else {
      for (std::size_t l = 0; l < 3; ++l) {
        if (l != i) f = K.mul(f, K.pow(y[l], k));
      }
    }
    out[i] = K.mul(x[i], f);
  }
  if (out[0] == 0 && out[1] == 0 && out[2] == 0) return std::nullopt;
  return BiPoint{ProjPoint(field, out[0], out[1], out[2]), P.y};
}

}  // namespace

CheckRecord verify_psi(unsigned m, unsigned n, std::uint64_t r, std::int64_t a, const ff::Field& field,
                       std::uint64_t bound, bool fault) {
  const auto shifted = static_cast<std::int64_t>(r) + a * static_cast<std::int64_t>(m);
  if (shifted < 0) throw ParameterError("psi_a needs r + a m >= 0");
  const SurfaceSpec source{m, n, static_cast<std::uint64_t>(shifted)};
  const SurfaceSpec target{m, n, r};
  CheckRecord rec("psi", {{"m", m}, {"n", n}, {"r", r}, {"a", a}, {"field", field->name()}});

  bool corrupt = fault;
  auto run = [&](const SurfaceSpec& from, const SurfaceSpec& to, std::int64_t exp) {
    std::uint64_t total = 0, defined = 0;
    for (const auto& P : enumerate_surface(from, field, bound)) {
      ++total;
      auto img = psi(exp, P);
      if (!img) {
        ++rec.skipped;
        continue;
      }
      if (corrupt) {
        const auto c = off_surface_x(img->y.codes());
        img->x = ProjPoint(field, c[0], c[1], c[2]);
        corrupt = false;
      }
      ++defined;
      if (!on_surface(to, *img)) rec.fail({{"source", P.to_string()}, {"image", img->to_string()}});
    }
    return nlohmann::json{{"points", total}, {"defined", defined}};
  };
  rec.detail["forward"] = run(source, target, a);
  rec.detail["backward"] = run(target, source, -a);
  return rec;
}

namespace {

using ExpMatrix = std::array<std::array<std::int64_t, 3>, 3>;

ExpMatrix diagonal(std::int64_t k) {
  ExpMatrix a{};
  for (std::size_t i = 0; i < 3; ++i) a[i][i] = k;
  return a;
}

// Two monomial maps agree projectively when all rows differ by one vector.
bool same_up_to_common_factor(const ExpMatrix& a, const ExpMatrix& b) {
  for (std::size_t i = 1; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (a[i][j] - b[i][j] != a[0][j] - b[0][j]) return false;
    }
  }
  return true;
}

}  // namespace

CheckRecord verify_graph_correspondence(std::uint64_t p, unsigned m, unsigned e, std::uint64_t bound, bool fault) {
  const auto t = geometry::make_triple(p, m, e);
  CheckRecord rec("graph_correspondence", t.to_json());
  const auto q = static_cast<std::int64_t>(t.q);
  const auto section_exp = static_cast<std::int64_t>(t.d * t.m) + (fault ? 1 : 0);
  // psi o s: x_i = y_i^q, then x_i / y_i.
  const ExpMatrix composed = diagonal(q - 1);
  const bool symbolic = same_up_to_common_factor(composed, diagonal(section_exp));
  rec.detail["symbolic"] = symbolic;
  if (!symbolic) rec.fail({{"reason", "p^e - 1 != dm"}, {"q", q}, {"section_exponent", section_exp}});

  if (t.q > bound / t.q) {
    rec.detail["pointwise"] = "skipped";
    return rec;
  }
  const auto L = ff::field_create(p, 2 * e);
  const auto& K = *L;
  std::vector<Code> rep(K.q(), 0);
  for (Code y = 1; y < K.q(); ++y) {
    const Code v = K.pow(y, m);
    if (rep[v] == 0) rep[v] = y;
  }
  const Code minus_one = K.neg(1);
  std::uint64_t samples = 0;
  for (Code y0 = 1; y0 < K.q() && samples < 64; ++y0) {
    const Code c = K.sub(minus_one, K.pow(y0, m));
    if (c == 0 || rep[c] == 0) continue;
    const ProjPoint y(L, y0, rep[c], 1);
    const auto& yc = y.codes();
    const BiPoint s{ProjPoint(L, K.pow(yc[0], t.q), K.pow(yc[1], t.q), K.pow(yc[2], t.q)), y};
    const BiPoint section{ProjPoint(L, K.pow(yc[0], static_cast<std::uint64_t>(section_exp)),
                                    K.pow(yc[1], static_cast<std::uint64_t>(section_exp)),
                                    K.pow(yc[2], static_cast<std::uint64_t>(section_exp))),
                          y};
    const auto img = psi(-1, s);
    ++samples;
    if (!on_surface({m, m, 0}, s) || !img || !(*img == section) || !on_surface({m, m, m}, section)) {
      rec.fail({{"y", y.to_string()}, {"section", section.to_string()}});
    }
  }
  rec.detail["pointwise"] = {{"field", K.name()}, {"samples", samples}};
  return rec;
}

CheckRecord verify_rel_frobenius(std::uint64_t p, unsigned m, unsigned e, std::uint64_t bound, bool fault) {
  const auto t = geometry::make_triple(p, m, e);
  CheckRecord rec("rel_frobenius", t.to_json());
  const auto d = static_cast<std::int64_t>(t.d);
  const std::int64_t lift_exp = d + (fault ? 1 : 0);
  const bool symbolic = same_up_to_common_factor(diagonal(lift_exp - d), diagonal(0));
  rec.detail["symbolic"] = symbolic;
  if (!symbolic) rec.fail({{"reason", "psi_{-d} o phi~_d is not constant"}, {"lift_exponent", lift_exp}});

  const auto& K = *t.field;
  const SurfaceSpec twisted{m, 1, t.q};
  const auto R = SurfaceSpec::R(m);
  std::uint64_t checked = 0;
  for (const auto& y : geometry::enumerate_C1(t.field, bound)) {
    if (y.code(0) == 0 || y.code(1) == 0 || y.code(2) == 0) {
      ++rec.skipped;
      continue;
    }
    const BiPoint lifted{geometry::apply_param({static_cast<std::uint64_t>(lift_exp), {1, 1, 1}}, y), y};
    const auto img = psi(-d, lifted);
    const BiPoint constant{ProjPoint(t.field, 1, 1, 1), y};
    ++checked;
    if (!img || !(*img == constant) || !on_surface(twisted, *img) || !on_surface(R, lifted)) {
      rec.fail({{"y", y.to_string()}, {"image", img ? img->to_string() : "undefined"}});
    }
  }
  rec.detail["pointwise"] = {{"field", K.name()}, {"points", checked}};
  return rec;
}

GammaRelation gamma_relation(unsigned m, std::uint64_t p, unsigned e, std::int64_t q_offset) {
  const auto t = geometry::make_triple(p, m, e);
  GammaRelation g;
  const __int128 mm = m;
  g.genus = static_cast<std::int64_t>((mm - 1) * (mm - 2) / 2);
  const __int128 d = t.d;
  g.lhs = static_cast<std::int64_t>(mm * mm * (d * (3 - mm) - 1));
  const __int128 q = static_cast<__int128>(t.q) + q_offset;
  g.rhs = static_cast<std::int64_t>(q * (2 - 2 * static_cast<__int128>(g.genus)) - 3 * mm);
  return g;
}

nlohmann::json LogPairInvariants::to_json() const {
  nlohmann::json j{{"m", m},
                   {"d", d},
                   {"c1sq", c1sq},
                   {"c2", c2},
                   {"slope", {slope.numerator(), slope.denominator()}},
                   {"chi2K", chi2K},
                   {"slope_exceeds_4", slope_exceeds_4},
                   {"pseff_threshold_met", pseff_threshold_met}};
  j["threshold_form"] = threshold_form ? nlohmann::json(*threshold_form) : nlohmann::json(nullptr);
  return j;
}

LogPairInvariants log_invariants(unsigned m, std::uint64_t d) {
  if (m < 1 || d < 1) throw ParameterError("log invariants need m, d >= 1");
  LogPairInvariants v;
  v.m = m;
  v.d = d;
  const auto mm = static_cast<std::int64_t>(m);
  const auto dd = static_cast<std::int64_t>(d);
  v.c1sq = dd * (mm - 3) - mm * mm + 6;
  v.c2 = mm * mm + 1;
  v.chi2K = dd * (mm - 3) - mm * mm + 5;
  v.slope = Rational(v.c1sq, v.c2);
  v.slope_exceeds_4 = v.slope > Rational(4);
  v.pseff_threshold_met = v.chi2K > 0;
  if (m > 3) v.threshold_form = dd * (mm - 3) > 5 * mm * mm - 2;
  return v;
}

std::optional<std::pair<unsigned, std::uint64_t>> slope_threshold_counterexample(unsigned m_lo, unsigned m_hi,
                                                                                std::uint64_t d_hi) {
  for (unsigned m = m_lo; m <= m_hi; ++m) {
    for (std::uint64_t d = 1; d <= d_hi; ++d) {
      if (!log_invariants(m, d).consistent()) return std::make_pair(m, d);
    }
  }
  return std::nullopt;
}

bool SingularLocus::ok() const {
  if (smooth) return !cross_checked || enumerated.empty();
  if (listed.size() != 3 * static_cast<std::size_t>(spec.n)) return false;
  for (const auto& P : listed) {
    if (!on_surface(spec, P)) return false;
  }
  if (!cross_checked) return true;
  auto a = listed, b = enumerated;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

nlohmann::json SingularLocus::to_json() const {
  auto pts = [](const std::vector<BiPoint>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& P : v) a.push_back(P.to_string());
    return a;
  };
  return {{"spec", spec.to_json()},
          {"smooth", smooth},
          {"listed", pts(listed)},
          {"enumerated", cross_checked ? pts(enumerated) : nlohmann::json(nullptr)},
          {"ok", ok()}};
}

namespace {

bool jacobian_rank_below_two(const ff::FieldSpec& K, const SurfaceSpec& s, const Coords& x, const Coords& y) {
  std::array<Code, 6> u{}, v{};
  const Code n = K.from_int(s.n), m = K.from_int(s.m), r = K.from_int(static_cast<std::int64_t>(s.r % K.p()));
  for (std::size_t i = 0; i < 3; ++i) {
    u[3 + i] = K.mul(n, K.pow(y[i], s.n - 1));
    v[i] = K.mul(m, K.mul(K.pow(x[i], s.m - 1), K.pow(y[i], s.r)));
    v[3 + i] = s.r == 0 ? 0 : K.mul(r, K.mul(K.pow(x[i], s.m), K.pow(y[i], s.r - 1)));
  }
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = a + 1; b < 6; ++b) {
      if (K.mul(u[a], v[b]) != K.mul(u[b], v[a])) return false;
    }
  }
  return true;
}

}  // namespace

SingularLocus singular_locus_Rmnr(const SurfaceSpec& s, const ff::Field& field, bool cross_check,
                                  std::uint64_t bound) {
  const auto& K = *field;
  SingularLocus loc;
  loc.spec = s;
  loc.smooth = s.smooth();
  if (!loc.smooth) {
    std::vector<Code> roots;
    const Code minus_one = K.neg(1);
    for (Code c = 1; c < K.q(); ++c) {
      if (K.pow(c, s.n) == minus_one) roots.push_back(c);
    }
    if (roots.size() < s.n) {
      throw ParameterError(K.name() + " lacks the " + std::to_string(s.n) + " solutions of s^n + t^n = 0");
    }
    for (Code c : roots) loc.listed.push_back(make_bipoint(field, {1, 0, 0}, {0, c, 1}));
    for (Code c : roots) loc.listed.push_back(make_bipoint(field, {0, 1, 0}, {c, 0, 1}));
    for (Code c : roots) loc.listed.push_back(make_bipoint(field, {0, 0, 1}, {c, 1, 0}));
  }
  if (cross_check) {
    loc.cross_checked = true;
    for (const auto& P : enumerate_surface(s, field, bound)) {
      if (jacobian_rank_below_two(K, s, P.x.codes(), P.y.codes())) loc.enumerated.push_back(P);
    }
  }
  return loc;
}

namespace {

// Fibres of the top surface over y agree with fibres of the base over y^c.
CheckRecord base_change_check(std::string name, nlohmann::json params, const SurfaceSpec& top,
                              const SurfaceSpec& base, std::uint64_t c, const ff::Field& field,
                              std::uint64_t bound) {
  const auto& K = *field;
  CheckRecord rec(std::move(name), std::move(params));
  const auto plane = geometry::enumerate_plane(K, bound);
  std::uint64_t top_points = 0;
  for (const auto& y : fermat_points(K, top.n, plane)) {
    const ProjPoint yc(field, K.pow(y[0], c), K.pow(y[1], c), K.pow(y[2], c));
    if (fermat_form(K, base.n, yc.codes()) != 0) {
      rec.fail({{"y", ProjPoint(field, y[0], y[1], y[2]).to_string()}, {"reason", "base point off X_n"}});
      continue;
    }
    for (const auto& x : plane) {
      const bool in_top = second_form(K, top.m, top.r, x, y) == 0;
      const bool in_base = second_form(K, base.m, base.r, x, yc.codes()) == 0;
      if (in_top) ++top_points;
      if (in_top != in_base) rec.fail(make_bipoint(field, x, y).to_string());
    }
  }
  rec.detail = {{"top_points", top_points}};
  return rec;
}

}  // namespace

CheckRecord verify_pullback_square(unsigned m, unsigned n, std::uint64_t r, unsigned b, const ff::Field& field,
                                   std::uint64_t bound) {
  return base_change_check("pullback_square",
                           {{"m", m}, {"n", n}, {"r", r}, {"b", b}, {"field", field->name()}},
                           {m, b * n, b * r}, {m, n, r}, b, field, bound);
}

CheckRecord verify_frobenius_square(unsigned m, unsigned n, std::uint64_t r, unsigned k, const ff::Field& field,
                                    std::uint64_t bound) {
  const auto c = ff::checked_pow(field->p(), k);
  return base_change_check("frobenius_square",
                           {{"m", m}, {"n", n}, {"r", r}, {"k", k}, {"field", field->name()}},
                           {m, n, c * r}, {m, n, r}, c, field, bound);
}

}  // namespace bneg::surface
