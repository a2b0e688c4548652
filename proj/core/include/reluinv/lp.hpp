#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "reluinv/network.hpp"

namespace reluinv {

enum class RowSense { LessEqual, GreaterEqual, Equal };

// coeffs . u  (<=|>=|=)  rhs
struct LinearConstraint {
  Vector coeffs;
  double rhs = 0.0;
  RowSense sense = RowSense::LessEqual;

  // Amount by which u violates the row (0 when satisfied).
  double violation(const Vector& u) const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// minimize objective . u  subject to rows and lower <= u <= upper.
struct LinearProgram {
  Vector objective;
  std::vector<LinearConstraint> rows;
  Vector lower;
  Vector upper;

  std::size_t num_vars() const noexcept { return static_cast<std::size_t>(objective.size()); }
  // Throws InvalidInput on dimension mismatch, non-finite coefficients or lower > upper.
  void validate() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LPStatus status) noexcept;

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  Vector point;
  double objective = 0.0;
  std::size_t pivots = 0;
  // Phase-2 objective after each pivot, filled when SimplexOptions::record_trace is set.
  std::vector<double> objective_trace;
};

struct SimplexOptions {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-11;
  bool record_trace = false;
};

/// Dense two-phase primal simplex.
///
/// Variables are shifted/reflected/split so that every column is nonnegative;
/// finite upper bounds become explicit rows. Entering column is the most
/// negative reduced cost (lowest index on ties) until 5*(vars+rows) degenerate
/// pivots have been taken, after which Bland's rule is used. Exceeding
/// 10^4*(vars+rows) pivots throws NumericalFailure.
LPSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

// True iff {u : rows, lower <= u <= upper} is nonempty (phase 1 only).
bool check_feasible(std::span<const LinearConstraint> rows, const Vector& lower,
                    const Vector& upper, const SimplexOptions& options = {});

}  // namespace reluinv
