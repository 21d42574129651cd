#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpbures/bures.hpp"

namespace cpbures {

struct SuiteOptions {
  std::uint64_t seed = 42;
  int trials = 50;
  /// Input and output size of the random maps.
  Eigen::Index dim = 2;
  /// Kraus ranks are drawn uniformly from [1, max_rank].
  Eigen::Index max_rank = 3;
  double tol = kDefaultTol;
  /// Factor applied to beta(phi, psi) and beta(psi, chi) before the triangle
  /// check. Anything other than 1 is a deliberate corruption used to confirm
  /// that the triangle suite can fail.
  double triangle_leg_scale = 1.0;
};

/// Outcome of one randomized check. A trial's margin is the allowed slack minus
/// the observed violation, so a trial passes when its margin is non-negative.
struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_margin = 0.0;
  /// Message from the first failing trial, empty when all passed.
  std::string first_failure;

  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
};

/// Runs every suite for options.trials trials. trials <= 0 yields an empty,
/// passing report. Solver errors inside a trial are recorded as failures.
SuiteReport property_suites(const SuiteOptions& options);

}  // namespace cpbures
