#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/network.hpp"
#include "reluinv/region.hpp"
#include "reluinv/run_log.hpp"
#include "reluinv/subproblems.hpp"

namespace reluinv {

struct OgoConfig {
  double step = 1e-2;                  // gamma^s, initial
  std::optional<double> step_min;      // gamma^s_min; unset means epsilon * sqrt(n)
  double step_max = 1.0;               // gamma^s_max
  double neighborhood = 1e-1;          // gamma^c
  double shrink = 0.9;                 // rho^c
  double expand = 1.5;                 // rho^e
  double epsilon = 1e-5;
  std::size_t max_iterations = 1000;   // N
  double tau = kDefaultBoundaryTolerance;
  std::size_t pattern_cap = kDefaultPatternCap;
  double oc_tolerance = kDefaultOcTolerance;
  double time_limit_s = 0.0;           // 0 disables

  double resolved_step_min(std::size_t input_dim) const;
  // Throws InvalidInput unless 0 < min <= step <= max, 0 < shrink < 1 < expand,
  // epsilon > 0 and max_iterations >= 1.
  void validate(std::size_t input_dim) const;
};

// Snapshot handed to an observer after every iteration.
struct OgoIterationEvent {
  std::size_t iter = 0;
  Phase phase = Phase::Primal;
  bool improved = false;
  double value = 0.0;        // g(x^k)
  double best_value = 0.0;   // incumbent after the update
  double step = 0.0;         // gamma^s after the update
  bool solved_dloa = false;
  std::vector<std::size_t> dloa_rows;  // K* u {latest} when DLOA ran
  std::size_t certified = 0;           // size of the certified-pattern record
};

struct OgoResult : RunResult {
  // Patterns of M(x*) certified at termination (EpsLocalOptimal only).
  std::vector<ActivationPattern> certified;
  // Boundary set of the returned point at tolerance tau.
  BoundarySet boundary;
  // Number of neighbor patterns of the returned point (0 if not enumerated).
  std::size_t neighbor_count = 0;
};

using OgoObserver = std::function<void(const OgoIterationEvent&)>;

/// Outer-approximation guided optimization.
///
/// The primal phase steps toward minimizers of the distance-localized model
/// (falling back to the neighbor-region model when its bound closes within
/// epsilon). The dual phase walks the neighbor patterns of the incumbent,
/// preferring those whose region holds an observation in a descent direction;
/// each is certified once its region-localized bound is within epsilon and
/// its descent-check LP shows no descent direction. Any region that is not
/// certified supplies the next probe. Terminates EpsLocalOptimal when every
/// neighbor pattern is certified.
OgoResult run_ogo(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                  const Vector& x0, const OgoConfig& config = {},
                  const OgoObserver& observer = {});

}  // namespace reluinv
