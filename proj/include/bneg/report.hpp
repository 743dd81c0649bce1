#pragma once

// Orchestration of every check for one (p, m, e), and the survey grid runner.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bneg/check.hpp"

namespace bneg::report {

inline constexpr int kSchema = 1;

std::string version();

struct Budgets {
  /// q bound for O(q^2) enumeration (P^2(F_q) scans, naive counts).
  std::uint64_t quadratic_q = std::uint64_t{1} << 12;
  /// q bound for O(q) enumeration (C_1, tallies, F_{q^2} samples).
  std::uint64_t linear_q = std::uint64_t{1} << 20;
  /// Degree bound for the norm expansion.
  unsigned max_d = 64;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static Budgets from_json(const nlohmann::json& j);
};

/// Check names in execution order.
const std::vector<std::string>& check_names();

/// Checks that decide the exit code and accept an injected fault.  "mult" is
/// accepted as an alias of "multiplicities".
bool fault_supported(const std::string& name);

struct VerificationReport {
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned e = 0;
  std::uint64_t q = 0;
  std::uint64_t d = 0;
  std::vector<CheckRecord> checks;
  /// Milliseconds per check; empty unless requested.
  std::vector<double> timings;
  std::string version_string;

  bool passed() const;
  const CheckRecord* find(const std::string& name) const;
  nlohmann::json to_json() const;
  /// Re-validates d m = p^e - 1 and that each check appears exactly once.
  static VerificationReport from_json(const nlohmann::json& j);
};

/// Runs every check.  Throws ParameterError for invalid triples and
/// ResourceError when a budget is exceeded; check failures go in the report.
VerificationReport run_verify(std::uint64_t p, unsigned m, unsigned e, const Budgets& budgets = {},
                              const std::optional<std::string>& fault = std::nullopt, bool timings = false);

struct SurveyConfig {
  std::vector<std::uint64_t> primes;
  std::vector<unsigned> ms;
  std::uint64_t max_q = 0;
  Budgets budgets;
  unsigned threads = 0;  // 0: hardware concurrency

  /// {"grid": {"p": [...], "m": {"min", "max"} | [...], "max_q": N},
  ///  "budgets": {...}, "threads": N}.  Throws ParameterError when malformed.
  static SurveyConfig from_json(const nlohmann::json& j);
};

struct SurveyRow {
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned e = 0;
  std::uint64_t q = 0;
  std::uint64_t d = 0;
  nlohmann::json values;  // self-intersection, invariants and pass flags
};

struct SurveySkip {
  std::uint64_t p = 0;
  unsigned m = 0;
  unsigned e = 0;
  std::string reason;
};

struct SurveyResult {
  std::vector<SurveyRow> rows;
  std::vector<SurveySkip> skipped;

  bool passed() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
  std::string to_text() const;
};

/// Feasible triples in (p, m, e) order; triples over budget are listed
/// under `skipped`.  Rows run concurrently and are assembled in grid order.
SurveyResult run_survey(const SurveyConfig& config);

}  // namespace bneg::report
