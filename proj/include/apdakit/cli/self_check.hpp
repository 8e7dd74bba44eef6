#pragma once

// Fast invariant suite behind the `check` subcommand: adjoint probes,
// Moreau-identity agreement, gradient checks, stepsize invariants and
// the boundedness energy bound. Failures are report content, not
// exceptions.

#include <iosfwd>
#include <string>
#include <vector>

namespace apdakit::cli {

struct CheckGroup {
  std::string name;
  bool passed = false;
  std::int64_t checks = 0;
  double worst_margin = 0.0;  // most adverse slack seen (negative = violated)
  std::string detail;
};

struct SelfCheckReport {
  std::vector<CheckGroup> groups;
  bool all_passed() const;
};

// inject_stepsize_fault flips the tau growth cap (a deliberate bug) so
// the stepsize group must fail; exercised by tests of the harness itself.
SelfCheckReport run_self_check(bool inject_stepsize_fault = false);

void print_report(std::ostream& out, const SelfCheckReport& report);

}  // namespace apdakit::cli
