#pragma once

// Randomized invariant checks shared by the unit tests and the acceptance
// binary. Each trial draws a fresh small network, target, feasible set and
// start point.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace reluinv::oracle {

struct InvariantReport {
  std::size_t trials = 0;
  std::size_t events = 0;
  std::size_t step_violations = 0;
  std::size_t incumbent_violations = 0;
  std::size_t reset_violations = 0;
  std::size_t projection_violations = 0;
  std::vector<std::string> examples;  // first few failures

  bool ok() const {
    return step_violations + incumbent_violations + reset_violations + projection_violations == 0;
  }
};

// OGO trials: step size within [min, max] after every iteration; incumbent
// equals the running minimum of observed values; the certified-pattern
// record is empty after every improving step.
InvariantReport ogo_invariant_trials(std::size_t trials, std::uint64_t seed);

// Projection onto random boxes with random linear rows: P(P(x)) == P(x)
// within 1e-9 and P(x) feasible within 1e-8.
InvariantReport projection_trials(std::size_t trials, std::uint64_t seed);

}  // namespace reluinv::oracle
