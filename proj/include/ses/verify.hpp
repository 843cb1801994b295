#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ses::verify {

struct Tolerances {
  double energy_tol = 1e-10;
  double entropy_tol = 1e-10;
  double fd_step = 1e-4;  // relative finite-difference step
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double observed = 0.0;  // worst error or witness value
  double bound = 0.0;
  int samples = 0;
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  int passed() const;
  int failed() const;
  // CSV lines suite,check,status,observed,bound,samples plus a summary line.
  std::string text() const;
};

std::vector<std::string> suite_names();

// Runs the named suites (all when empty). Throws InvalidArgument for an unknown name.
Report run(std::uint64_t seed, const Tolerances& tol, const std::vector<std::string>& suites = {});

}  // namespace ses::verify
