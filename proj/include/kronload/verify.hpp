#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "kronload/cache.hpp"

namespace kronload {

enum class VerifyScope { quick, full, extended };

// Parses "quick", "full" or "long".
VerifyScope parse_scope(std::string_view text);

struct Check {
  std::string fixture;
  std::string item;
  bool pass = false;
  std::string observed;
  std::string expected;
  std::string tolerance;
  std::string note;
};

struct VerifyReport {
  std::vector<Check> checks;
  std::vector<std::string> cache_problems;

  bool ok() const;
  std::size_t failures() const;
};

// Printed loading values are sometimes cut to fewer than 4 decimals. A value
// matches if it is within `tol` of `computed`, or if the printed text has
// fewer than 4 decimals and is a prefix of `computed` written with 4.
bool loading_matches(const std::string& printed, double computed, double tol, bool* truncated = nullptr);

VerifyReport verify(VerifyScope scope, ComputeContext& ctx);

// One line per fixture with pass/fail counts; failing checks in full, and
// every check when verbose.
void print_report(const VerifyReport& report, std::ostream& out, bool verbose);

}  // namespace kronload
