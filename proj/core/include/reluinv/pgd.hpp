#pragma once

#include <cstddef>

#include "reluinv/feasible_set.hpp"
#include "reluinv/network.hpp"
#include "reluinv/run_log.hpp"

namespace reluinv {

// Euclidean projection onto X. A box-only set is clamped; otherwise Dykstra's
// alternating projections cycle over the linear rows and the box until both
// the iterate and the corrections move by less than 1e-10 over a round
// (NumericalFailure after 10^5 rounds).
Vector project(const Vector& x, const FeasibleSet& domain);

struct PgdConfig {
  double scale = 1e-3;              // s^k
  double step = 1.0;                // alpha^k
  std::size_t max_iterations = 10000;
  std::size_t stall_limit = 20;     // consecutive steps without improvement
  std::size_t projection_period = 16;
  double time_limit_s = 0.0;        // 0 disables

  void validate() const;
};

/// Projected gradient baseline:
///   target = [x - s grad g(x)]_X   (projection every `projection_period` steps)
///   x <- x + alpha (target - x)
/// The reported solution is the best iterate that went through a projection.
RunResult run_pgd(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                  const Vector& x0, const PgdConfig& config = {});

}  // namespace reluinv
