#pragma once

// Self-check suites behind the CLI `validate` subcommand. Sample sets and
// seeds are fixed, so repeated runs reproduce the report byte for byte.
// Every check reports the worst error it observed and the bound it must
// stay under; pass means worst < bound. Sign-structure checks record the
// negated margin with bound 0, so the same relation applies.

#include <string>
#include <vector>

#include "gyre/types.hpp"

namespace gyre {

struct CheckResult {
  std::string name;
  double worst = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Suite names accepted by run_validation_suite, in display order:
// identities, asymptotics, closedform, period-invariants.
const std::vector<std::string>& validation_suites();

// Run one suite. Throws DomainError for an unknown name.
SuiteReport run_validation_suite(const std::string& suite);

}  // namespace gyre
