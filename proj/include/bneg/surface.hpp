#pragma once

// The surfaces R_{m,n,r} in P^2 x P^2,
//   y0^n + y1^n + y2^n = 0,   x0^m y0^r + x1^m y1^r + x2^m y2^r = 0,
// checked pointwise over finite fields.  R_m = R_{m,1,1}.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include "json.hpp"

#include "bneg/check.hpp"
#include "bneg/ff.hpp"
#include "bneg/point.hpp"

namespace bneg::surface {

/// Default bound on q for the cubic and quartic scans of P^2 x P^2.
inline constexpr std::uint64_t kDefaultSampleBound = 32;

struct SurfaceSpec {
  unsigned m = 1;
  unsigned n = 1;
  std::uint64_t r = 1;

  static SurfaceSpec R(unsigned m) { return {m, 1, 1}; }
  bool smooth() const { return m == 1 || r <= 1; }
  nlohmann::json to_json() const { return {{"m", m}, {"n", n}, {"r", r}}; }
};

struct BiPoint {
  geometry::ProjPoint x;
  geometry::ProjPoint y;

  bool operator==(const BiPoint& o) const { return x == o.x && y == o.y; }
  bool operator<(const BiPoint& o) const { return x < o.x || (x == o.x && y < o.y); }
  /// "([x0:x1:x2],[y0:y1:y2])"
  std::string to_string() const;
};

bool on_surface(const SurfaceSpec& s, const BiPoint& point);

/// F_q-points of R_{m,n,r}, y-major in enumerate_plane order.
std::vector<BiPoint> enumerate_surface(const SurfaceSpec& s, const ff::Field& field,
                                       std::uint64_t bound = kDefaultSampleBound);

/// Over P^2(F_q)^2: the three 2x2 equations together with y0 + y1 + y2 = 0
/// cut out the same set as the complete intersection of R_m; off Z_m the
/// three equations already force the linear one; first-projection fibres
/// have q + 1 points over Z_m(F_q) and one point elsewhere.
/// fault: compare the three equations without the linear one.
CheckRecord verify_blowup_model(unsigned m, const ff::Field& field, std::uint64_t bound = kDefaultSampleBound,
                                bool fault = false);

/// ([x^d], x) on R_m for every x in C_1(F_{q^t}), t = 1, 2, ... while
/// q^t <= bound.  fault: replace one image by a coordinate point off R_m.
CheckRecord verify_lift(std::uint64_t p, unsigned m, unsigned e,
                        std::uint64_t bound = ff::kDefaultEnumerationBound, bool fault = false);

/// A point of C_1 over F_q or F_{q^2} whose image under x -> ([x^k], x) is
/// off R_m, if any.
std::optional<BiPoint> lift_witness(std::uint64_t p, unsigned m, unsigned e, std::uint64_t k,
                                    std::uint64_t bound = ff::kDefaultEnumerationBound);

/// phi~_d^* O_R(a, b) has degree d a + b on C_1.
std::int64_t canonical_pairing(unsigned m, std::int64_t a, std::int64_t b, std::uint64_t d);

/// -2 - K . C~_d with K = O_R(m - 3, -1).
std::int64_t adjunction_self_intersection(unsigned m, std::uint64_t d);

/// psi_a maps F_q-points of R_{m,n,r+am} into R_{m,n,r} where defined, and
/// psi_{-a} maps back.  Indeterminate points are counted in `skipped`.
/// fault: replace the first defined image (forward, else backward) by a
/// coordinate point off the target.
CheckRecord verify_psi(unsigned m, unsigned n, std::uint64_t r, std::int64_t a, const ff::Field& field,
                       std::uint64_t bound = kDefaultSampleBound, bool fault = false);

/// psi o s equals the section y -> ([y^(dm)], y) as monomial maps up to a
/// common factor, and pointwise on sample points of X_m(F_{q^2}).
/// fault: use dm + 1 for the section exponent.
CheckRecord verify_graph_correspondence(std::uint64_t p, unsigned m, unsigned e,
                                        std::uint64_t bound = ff::kDefaultEnumerationBound, bool fault = false);

/// psi_{-d} o phi~_d equals the constant section y -> ([1:1:1], y),
/// symbolically and on C_1(F_q).  fault: use d + 1 in phi~_d.
CheckRecord verify_rel_frobenius(std::uint64_t p, unsigned m, unsigned e,
                                 std::uint64_t bound = ff::kDefaultEnumerationBound, bool fault = false);

struct GammaRelation {
  std::int64_t lhs = 0;  // m^2 (d(3 - m) - 1)
  std::int64_t rhs = 0;  // p^e (2 - 2g) - 3m
  std::int64_t genus = 0;
  bool holds() const { return lhs == rhs; }
};

/// m^2 (d(3-m) - 1) against p^e (2 - 2g) - 3m with g = (m-1)(m-2)/2.
/// `q_offset` is added to p^e (a fault hook; 0 in normal use).
GammaRelation gamma_relation(unsigned m, std::uint64_t p, unsigned e, std::int64_t q_offset = 0);

using Rational = boost::rational<std::int64_t>;

struct LogPairInvariants {
  unsigned m = 0;
  std::uint64_t d = 0;
  std::int64_t c1sq = 0;
  std::int64_t c2 = 0;
  Rational slope;
  std::int64_t chi2K = 0;
  bool slope_exceeds_4 = false;
  bool pseff_threshold_met = false;
  /// d (m - 3) > 5 m^2 - 2, only for m > 3.
  std::optional<bool> threshold_form;

  bool consistent() const { return !threshold_form || *threshold_form == slope_exceeds_4; }
  nlohmann::json to_json() const;
};

LogPairInvariants log_invariants(unsigned m, std::uint64_t d);

/// First (m, d) with m in [m_lo, m_hi], d in [1, d_hi] where the slope test
/// and the closed-form threshold disagree.
std::optional<std::pair<unsigned, std::uint64_t>> slope_threshold_counterexample(unsigned m_lo, unsigned m_hi,
                                                                                std::uint64_t d_hi);

struct SingularLocus {
  SurfaceSpec spec;
  bool smooth = false;
  /// ([1:0:0],[0:s:t]), ([0:1:0],[s:0:t]), ([0:0:1],[s:t:0]) with s^n + t^n = 0.
  std::vector<BiPoint> listed;
  /// Points of the surface where the 2 x 6 Jacobian has rank < 2.
  std::vector<BiPoint> enumerated;
  bool cross_checked = false;

  bool ok() const;
  nlohmann::json to_json() const;
};

/// The listed singular points of a non-smooth R_{m,n,r}; with cross_check,
/// also the Jacobian scan over all F_q-points.
SingularLocus singular_locus_Rmnr(const SurfaceSpec& s, const ff::Field& field, bool cross_check = true,
                                  std::uint64_t bound = kDefaultSampleBound);

/// pi_{1,b}: R_{m,bn,br} -> R_{m,n,r} over X_{bn} -> X_n, fibre by fibre.
CheckRecord verify_pullback_square(unsigned m, unsigned n, std::uint64_t r, unsigned b, const ff::Field& field,
                                   std::uint64_t bound = kDefaultSampleBound);

/// R_{m,n,p^k r} -> R_{m,n,r} over the p^k-th power Frobenius of X_n.
CheckRecord verify_frobenius_square(unsigned m, unsigned n, std::uint64_t r, unsigned k, const ff::Field& field,
                                    std::uint64_t bound = kDefaultSampleBound);

}  // namespace bneg::surface
