#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace bneg {

/// Outcome of one verification check.  Serializes as
/// {"check", "params", "pass", "witness", "skipped", ...}.
struct CheckRecord {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  bool pass = true;
  /// Informational checks are reported but never decide the verdict.
  bool informational = false;
  nlohmann::json witness;  // null unless a failure was seen
  std::uint64_t skipped = 0;
  nlohmann::json detail = nlohmann::json::object();

  CheckRecord() = default;
  CheckRecord(std::string name, nlohmann::json p) : check(std::move(name)), params(std::move(p)) {}

  /// Marks failure; the first witness wins.
  void fail(nlohmann::json w) {
    if (pass) witness = std::move(w);
    pass = false;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["params"] = params;
    j["pass"] = pass;
    j["informational"] = informational;
    j["witness"] = witness;
    j["skipped"] = skipped;
    j["detail"] = detail;
    return j;
  }
};

}  // namespace bneg
