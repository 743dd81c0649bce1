#pragma once

// The line C_1 = V(x0 + x1 + x2), its images C_d under the d-th power map,
// the m^2 points Z_m, and the intersection numbers of the strict transform
// of C_d on the blowup R_m of P^2 in Z_m.
//
// Throughout, (p, m, e) fixes q = p^e and d = (q - 1) / m; d is never passed
// on its own.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bneg/check.hpp"
#include "bneg/ff.hpp"
#include "bneg/point.hpp"
#include "bneg/poly.hpp"

namespace bneg::geometry {

/// Budget for quadratic-in-q enumeration (P^2(F_q) scans).
inline constexpr std::uint64_t kDefaultPlaneBound = std::uint64_t{1} << 12;

/// Validated parameters: p prime, m >= 1, m | p^e - 1.
struct Triple {
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned e = 0;
  std::uint64_t q = 0;
  std::uint64_t d = 0;
  ff::Field field;

  nlohmann::json to_json() const;
};

/// Throws ParameterError unless p is prime, m, e >= 1 and m | p^e - 1.
Triple make_triple(std::uint64_t p, unsigned m, unsigned e);

/// phi_d, optionally followed by the diagonal action of a twist in mu_m^3.
struct ParamMap {
  std::uint64_t d = 1;
  std::array<ff::Code, 3> twist{1, 1, 1};
};

/// [zeta0 x0^d : zeta1 x1^d : zeta2 x2^d], normalized.
ProjPoint apply_param(const ParamMap& map, const ProjPoint& point);

/// [zeta^i : zeta^j : 1] for zeta = root_of_unity(m), (i, j) lexicographic.
std::vector<ProjPoint> z_points(unsigned m, const ff::Field& field);

/// Index of P in z_points order, or nullopt if P is not in Z_m.
std::optional<std::size_t> z_index(unsigned m, const ProjPoint& point);

/// The q + 1 points of x0 + x1 + x2 = 0: [a : -1-a : 1] for a in code order,
/// then [1 : -1 : 0].
std::vector<ProjPoint> enumerate_C1(const ff::Field& field,
                                    std::uint64_t bound = ff::kDefaultEnumerationBound);

enum class ProfileSource { taylor, preimage };

struct MultiplicityProfile {
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned e = 0;
  std::uint64_t d = 0;
  ProfileSource source = ProfileSource::taylor;
  /// Indexed like z_points(m).
  std::vector<std::uint64_t> mults;

  std::uint64_t sum() const;
  std::uint64_t sum_squares() const;
  /// {"m","p","e","d","source","points":[{"i","j","mult"}]}
  nlohmann::json to_json() const;
};

/// Order of f_d at each point of Z_m.
MultiplicityProfile multiplicity_profile_taylor(std::uint64_t p, unsigned m, unsigned e,
                                                unsigned max_degree = poly::kDefaultNormDegreeBound);
/// Same, reusing an already expanded f_d.
MultiplicityProfile multiplicity_profile_taylor(const Triple& t, const poly::FPoly& f_d);

/// Number of points of C_1(F_q) with nonzero coordinates sent to each point
/// of Z_m by phi_d.
MultiplicityProfile multiplicity_profile_preimage(std::uint64_t p, unsigned m, unsigned e,
                                                  std::uint64_t bound = ff::kDefaultEnumerationBound);
MultiplicityProfile multiplicity_profile_preimage(const Triple& t,
                                                  std::uint64_t bound = ff::kDefaultEnumerationBound);

/// A class d H - sum m_P E_P on the blowup of P^2 in Z_m.
struct CurveClass {
  std::uint64_t degree = 0;
  std::vector<std::uint64_t> mults;

  std::int64_t self_intersection() const;
  /// K . C = -3 degree + sum m_P
  std::int64_t canonical_degree() const;
};

CurveClass strict_transform_class(std::uint64_t p, unsigned m, unsigned e);

/// d(3 - m) - 1
std::int64_t expected_self_intersection(std::uint64_t d, unsigned m);

/// F_q-rational points of P^2 where f and its three partials vanish.
std::vector<ProjPoint> rational_singular_points(const poly::FPoly& f, const ff::Field& field,
                                                std::uint64_t plane_bound = kDefaultPlaneBound);

struct MainTheoremReport {
  Triple triple;
  MultiplicityProfile taylor;
  MultiplicityProfile preimage;
  std::int64_t self_intersection = 0;
  std::int64_t expected = 0;
  bool lattice_ok = false;
  bool oracles_agree = false;
  /// sum m_P = dm - 1 and sum m_P^2 = d^2 + d(m - 3) + 1 for both profiles.
  bool sums_ok = false;
  bool rational_ok = false;
  bool singular_ok = false;
  std::vector<ProjPoint> singular_points;
  /// Singular points found outside Z_m.
  std::vector<ProjPoint> stray_singular_points;

  bool ok() const { return lattice_ok && oracles_agree && sums_ok && rational_ok && singular_ok; }
  nlohmann::json to_json() const;
};

MainTheoremReport verify_main_theorem(std::uint64_t p, unsigned m, unsigned e,
                                      std::uint64_t plane_bound = kDefaultPlaneBound);
/// Checks supplied profiles and singular points; used for fault testing.
MainTheoremReport check_main_theorem(const Triple& t, MultiplicityProfile taylor,
                                     MultiplicityProfile preimage, std::vector<ProjPoint> singular_points);

/// Twist exponents (i, j): the twist (zeta^i, zeta^j, 1) with zeta = root_of_unity(m).
std::array<ff::Code, 3> twist_from_exponents(const ff::FieldSpec& field, unsigned m, unsigned i, unsigned j);

/// All m^2 - 1 nonidentity twists, normalized to last coordinate 1, in (i, j) order.
std::vector<std::array<ff::Code, 3>> nonidentity_twists(const ff::FieldSpec& field, unsigned m);

struct GaloisIntersection {
  std::array<ff::Code, 3> twist{};
  /// d if two normalized twist coordinates agree, else 0.
  std::uint64_t predicted = 0;
  /// Sum of local multiplicities over the enumerated coincidence points.
  std::uint64_t enumerated = 0;
  std::vector<ProjPoint> coincidences;
  std::vector<std::uint64_t> local_multiplicities;

  bool ok() const { return predicted == enumerated; }
  nlohmann::json to_json() const;
};

/// C~_d . zeta C~_d for a nonidentity twist, predicted and enumerated.
GaloisIntersection galois_intersection(const std::array<ff::Code, 3>& twist, std::uint64_t p, unsigned m,
                                       unsigned e);
GaloisIntersection galois_intersection(const std::array<ff::Code, 3>& twist, const Triple& t);

/// Order in t of the contact of C~_d and zeta C~_d at the point of C_1 with
/// x_k = 0, via the expansion x_k = t, x_i = 1, x_j = -1 - t.
std::uint64_t local_contact_order(const std::array<ff::Code, 3>& twist, const Triple& t, int k);

struct GaloisTable {
  Triple triple;
  std::vector<GaloisIntersection> rows;
  std::int64_t self_intersection = 0;
  /// C~^2 + sum over twists of C~ . zeta C~
  std::int64_t decomposition_sum = 0;

  bool ok() const;
  nlohmann::json to_json() const;
};

GaloisTable galois_table(const Triple& t, std::int64_t self_intersection);

/// f_{ad}(x^a) against the product of the a^2 twisted copies of f_d over
/// the given field, plus pairwise distinctness of the factors.
bool verify_total_splitting(unsigned a, unsigned d, const ff::Field& field);

/// Counts, over C_1(F_q), images under phi_d outside Z_m that are hit more
/// than once.  Zero when phi_d is injective there.
std::uint64_t phi_collisions_off_z(const Triple& t);

}  // namespace bneg::geometry
