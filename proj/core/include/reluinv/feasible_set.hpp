#pragma once

#include <vector>

#include "reluinv/lp.hpp"
#include "reluinv/network.hpp"

namespace reluinv {

// The input domain X: a bounded box plus general linear rows over x.
struct FeasibleSet {
  Vector lower;
  Vector upper;
  std::vector<LinearConstraint> constraints;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(lower.size()); }
  bool has_constraints() const noexcept { return !constraints.empty(); }

  // Throws InvalidInput unless the box is finite, ordered, and every row has
  // dimension dim().
  void validate() const;
  bool contains(const Vector& x, double tol = 1e-8) const;
  Vector clamp(const Vector& x) const;

  static FeasibleSet box(Vector lower, Vector upper);
};

}  // namespace reluinv
