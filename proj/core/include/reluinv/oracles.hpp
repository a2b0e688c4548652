#pragma once

#include <cstddef>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/network.hpp"

namespace reluinv {

struct GridPoint {
  Vector x;
  double value = 0.0;
};

struct GridOracleResult {
  Vector x_best;
  double g_best = 0.0;
  // Feasible grid points no lower than any feasible grid neighbor, in grid
  // order. Knot points count as grid points in 1-D.
  std::vector<GridPoint> local_minima;
  std::size_t evaluated = 0;
};

/// Exhaustive evaluation on a uniform grid with spacing `resolution` over the
/// box, keeping points that satisfy the linear rows of X. In 1-D every knot
/// where the activation pattern changes between two grid points is located
/// by bisection and added. Throws InvalidInput for more than 2 inputs.
GridOracleResult oracle_grid(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                             double resolution);

struct RegionOracleResult {
  Vector x_best;
  double g_best = 0.0;
  double lower_bound = 0.0;  // max over iterations of g(x^t) - gap^t
  double gap = 0.0;          // Frank-Wolfe gap at the last iterate
  std::size_t iterations = 0;
};

/// Frank-Wolfe on the loss of the pattern's affine extension over
/// X n Y(pattern), with the LP solver as linear-minimization oracle and step
/// 2/(t+2). Stops early once the gap reaches zero. Throws InvalidInput when
/// the region is empty.
RegionOracleResult oracle_region_fw(const Network& net, const LossSpec& loss,
                                    const FeasibleSet& domain, const ActivationPattern& pattern,
                                    std::size_t iterations);

}  // namespace reluinv
