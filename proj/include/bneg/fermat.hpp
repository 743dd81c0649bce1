#pragma once

// Points of the Fermat curve X_m = V(y0^m + y1^m + y2^m) over F_q.

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "bneg/ff.hpp"

namespace bneg::fermat {

/// Default bound on q for the quadratic chart scan.
inline constexpr std::uint64_t kDefaultNaiveBound = std::uint64_t{1} << 9;

enum class CountMethod { naive, tally };

std::string to_string(CountMethod method);
/// "naive" or "tally"; throws ParameterError otherwise.
CountMethod parse_method(const std::string& name);

struct FermatCount {
  unsigned m = 0;
  std::uint64_t q = 0;
  std::uint64_t count = 0;
  CountMethod method = CountMethod::naive;
};

/// Chart y2 = 1 over all (y0, y1), plus the line y2 = 0.
FermatCount count_points_naive(unsigned m, const ff::Field& field, std::uint64_t bound = kDefaultNaiveBound);

/// sum_s r(s) r(-1 - s) + r(-1), with r(s) = #{y : y^m = s}.
FermatCount count_points_tally(unsigned m, const ff::Field& field,
                               std::uint64_t bound = ff::kDefaultEnumerationBound);

FermatCount count_points(unsigned m, const ff::Field& field, CountMethod method, std::uint64_t bound);

/// Points of X_m(F_q) with some coordinate zero.
std::uint64_t count_axis_points(unsigned m, const ff::Field& field);

/// r(s) for s != 0 is either 0 or m when m | q - 1.
bool tally_is_kummer(unsigned m, const ff::Field& field);

struct ShiodaKatsura {
  unsigned m = 0;
  std::uint64_t p = 0;
  unsigned e = 0;
  bool applicable = false;
  std::optional<std::int64_t> formula;
  std::optional<std::uint64_t> count;
  std::optional<bool> match;

  nlohmann::json to_json() const;
};

/// Applicable when e is even, p^nu = -1 mod m for some nu, and p^e = 1 mod m.
/// Compares 1 - (m-1)(m-2)/2 p^(e/2) + p^e with the enumerated count.
ShiodaKatsura shioda_katsura_check(unsigned m, std::uint64_t p, unsigned e,
                                   std::uint64_t bound = ff::kDefaultEnumerationBound);

struct MultFromCount {
  std::uint64_t count = 0;
  /// |X_m| - 3m
  std::int64_t numerator = 0;
  std::uint64_t denominator = 0;
  /// Set when numerator / m^2 is a nonnegative integer.
  std::optional<std::uint64_t> value;

  bool valid() const { return value.has_value(); }
};

/// (|X_m(F_q)| - 3m) / m^2 with q = p^e; requires m | q - 1.
MultFromCount mult_from_count(unsigned m, std::uint64_t p, unsigned e,
                              std::uint64_t bound = ff::kDefaultEnumerationBound);

/// | |X_m(F_q)| - (q + 1) | <= (m - 1)(m - 2) sqrt(q), compared after squaring.
bool hasse_weil_ok(unsigned m, std::uint64_t q, std::uint64_t count);

/// {"m","q","count","method","sk_formula","sk_applicable","sk_match"}
nlohmann::json to_json(const FermatCount& c, const std::optional<ShiodaKatsura>& sk);

}  // namespace bneg::fermat
