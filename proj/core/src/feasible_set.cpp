#include "reluinv/feasible_set.hpp"

#include <cmath>
#include <string>

#include "reluinv/errors.hpp"

namespace reluinv {

void FeasibleSet::validate() const {
  if (lower.size() == 0) throw InvalidInput("feasible set has dimension zero");
  if (upper.size() != lower.size()) throw InvalidInput("box bounds have different lengths");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw InvalidInput("box bound " + std::to_string(i) + " is not finite");
    }
    if (lower[i] > upper[i]) {
      throw InvalidInput("box bound " + std::to_string(i) + " has lower > upper");
    }
  }
  for (std::size_t r = 0; r < constraints.size(); ++r) {
    const LinearConstraint& c = constraints[r];
    if (c.coeffs.size() != lower.size()) {
      throw InvalidInput("linear constraint " + std::to_string(r) + " has wrong dimension");
    }
    if (!c.coeffs.allFinite() || !std::isfinite(c.rhs)) {
      throw InvalidInput("linear constraint " + std::to_string(r) + " is not finite");
    }
  }
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  }
  for (const LinearConstraint& c : constraints) {
    if (c.violation(x) > tol) return false;
  }
  return true;
}

Vector FeasibleSet::clamp(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  FeasibleSet x{std::move(lower), std::move(upper), {}};
  x.validate();
  return x;
}

}  // namespace reluinv
