#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/lp.hpp"
#include "reluinv/network.hpp"

namespace reluinv {

enum class HalfSpaceSense { NonNegative, NonPositive };

// form(x) >= 0 or form(x) <= 0.
struct HalfSpace {
  AffineForm form;
  HalfSpaceSense sense = HalfSpaceSense::NonPositive;

  // Positive amount by which x lies outside, 0 inside.
  double violation(const Vector& x) const;
  LinearConstraint to_constraint() const;
};

/// Polyhedron of inputs whose activation pattern is `pattern`, written purely
/// in x-space: inequality j is the masked pre-activation of ReLU neuron j,
/// required >= 0 if j is active and <= 0 otherwise.
struct RegionSystem {
  ActivationPattern pattern;
  std::vector<HalfSpace> inequalities;

  bool contains(const Vector& x, double tol) const;
  std::vector<LinearConstraint> constraints() const;
};

// The constraint 0 >= r.x + d separating an observation from a region.
struct FeasibilityCut {
  Vector r;
  double d = 0.0;
  std::size_t neuron = 0;  // the discrepancy node

  double value(const Vector& x) const { return r.dot(x) + d; }
  LinearConstraint to_constraint() const { return {r, -d, RowSense::LessEqual}; }
};

RegionSystem region_system(const Network& net, const ActivationPattern& pattern);

bool contains(const RegionSystem& region, const Vector& x, double tol);

// True iff X intersected with the region is nonempty (LP phase 1).
bool region_feasible(const RegionSystem& region, const FeasibleSet& domain);

inline constexpr std::size_t kDefaultPatternCap = 20;

/// Lazily enumerates M(x*): every assignment of the boundary neurons of x*
/// to active/inactive whose region meets X.
///
/// Assignments are visited lexicographically over ascending boundary-neuron
/// index with inactive before active. The constructor throws
/// PatternCapExceeded when the boundary set is larger than `cap`.
class NeighborPatternEnumerator {
 public:
  NeighborPatternEnumerator(const Network& net, const FeasibleSet& domain, const Vector& x_star,
                            double tau = kDefaultBoundaryTolerance,
                            std::size_t cap = kDefaultPatternCap);
  // The enumerator keeps references to the network and the feasible set.
  NeighborPatternEnumerator(Network&&, const FeasibleSet&, const Vector&, double = 0,
                            std::size_t = 0) = delete;
  NeighborPatternEnumerator(const Network&, FeasibleSet&&, const Vector&, double = 0,
                            std::size_t = 0) = delete;

  std::optional<ActivationPattern> next();

  const PatternAndBoundary& base() const noexcept { return base_; }
  std::uint64_t assignments_total() const noexcept { return total_; }

 private:
  const Network* net_;
  const FeasibleSet* domain_;
  PatternAndBoundary base_;
  std::uint64_t next_ = 0;
  std::uint64_t total_ = 1;
};

std::vector<ActivationPattern> neighbor_patterns(const Network& net, const FeasibleSet& domain,
                                                 const Vector& x_star,
                                                 double tau = kDefaultBoundaryTolerance,
                                                 std::size_t cap = kDefaultPatternCap);

// Lowest ReLU index whose membership differs. Throws NoDiscrepancy when the
// patterns are equal.
std::size_t discrepancy_node(const ActivationPattern& reference, const ActivationPattern& observed);

// Cut built from the discrepancy node between `region_pattern` and the sign
// pattern of x_out. Throws NoDiscrepancy when x_out lies in the region within
// `tau`, or when no separating cut arises.
FeasibilityCut feasibility_cut(const Network& net, const ActivationPattern& region_pattern,
                               const Vector& x_out, double tau = kDefaultBoundaryTolerance);
// Same cut, reusing an already built region system for the pattern.
FeasibilityCut feasibility_cut(const Network& net, const RegionSystem& region, const Vector& x_out,
                               double tau = kDefaultBoundaryTolerance);

// True iff some observation inside the region (within tau) lies in a strict
// descent direction of the pattern's gradient at x*.
bool precheck_descent(const Network& net, const LossSpec& loss, const Vector& x_star,
                      const RegionSystem& region, std::span<const Vector> observations,
                      double tau = kDefaultBoundaryTolerance);
bool precheck_descent(const Network& net, const LossSpec& loss, const Vector& x_star,
                      const ActivationPattern& pattern, std::span<const Vector> observations,
                      double tau = kDefaultBoundaryTolerance);

}  // namespace reluinv
