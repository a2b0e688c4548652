#include "reluinv/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "reluinv/errors.hpp"

namespace reluinv {

double LinearConstraint::violation(const Vector& u) const {
  const double lhs = coeffs.dot(u);
  switch (sense) {
    case RowSense::LessEqual:
      return std::max(0.0, lhs - rhs);
    case RowSense::GreaterEqual:
      return std::max(0.0, rhs - lhs);
    case RowSense::Equal:
      return std::abs(lhs - rhs);
  }
  return 0.0;
}

void LinearProgram::validate() const {
  const auto d = objective.size();
  if (lower.size() != d || upper.size() != d) {
    throw InvalidInput("LP bounds do not match the number of variables");
  }
  if (!objective.allFinite()) throw InvalidInput("LP objective has non-finite coefficients");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i] ||
        lower[i] == kInfinity || upper[i] == -kInfinity) {
      throw InvalidInput("LP variable " + std::to_string(i) + " has invalid bounds");
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].coeffs.size() != d) {
      throw InvalidInput("LP row " + std::to_string(r) + " has wrong length");
    }
    if (!rows[r].coeffs.allFinite() || !std::isfinite(rows[r].rhs)) {
      throw InvalidInput("LP row " + std::to_string(r) + " has non-finite coefficients");
    }
  }
}

const char* to_string(LPStatus status) noexcept {
  switch (status) {
    case LPStatus::Optimal:
      return "optimal";
    case LPStatus::Infeasible:
      return "infeasible";
    case LPStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// u_i = base + sign * y_plus - y_minus, with y >= 0.
struct ColumnMap {
  double base = 0.0;
  double sign = 1.0;
  int plus = -1;
  int minus = -1;
};

// maximize c.y  s.t.  A y <= b, y >= 0, and the map back to the original variables.
struct StandardForm {
  std::vector<ColumnMap> columns;
  std::vector<std::pair<Vector, double>> rows;  // (coeffs over y, rhs)
  Vector gain;                                   // c over y (maximization)
  double constant = 0.0;                         // min objective = constant - max value
  int width = 0;
};

StandardForm to_standard_form(const LinearProgram& lp) {
  StandardForm sf;
  const auto d = static_cast<Eigen::Index>(lp.num_vars());
  sf.columns.resize(static_cast<std::size_t>(d));
  std::vector<std::pair<int, double>> upper_rows;  // (column, bound)
  for (Eigen::Index i = 0; i < d; ++i) {
    ColumnMap& cm = sf.columns[static_cast<std::size_t>(i)];
    const bool lo = std::isfinite(lp.lower[i]);
    const bool hi = std::isfinite(lp.upper[i]);
    cm.plus = sf.width++;
    if (lo) {
      cm.base = lp.lower[i];
      if (hi) upper_rows.emplace_back(cm.plus, lp.upper[i] - lp.lower[i]);
    } else if (hi) {
      cm.base = lp.upper[i];
      cm.sign = -1.0;
    } else {
      cm.minus = sf.width++;
    }
  }

  auto to_y = [&](const Vector& coeffs, double& shift) {
    Vector out = Vector::Zero(sf.width);
    shift = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const ColumnMap& cm = sf.columns[static_cast<std::size_t>(i)];
      const double a = coeffs[i];
      shift += a * cm.base;
      out[cm.plus] += cm.sign * a;
      if (cm.minus >= 0) out[cm.minus] -= a;
    }
    return out;
  };

  for (const LinearConstraint& row : lp.rows) {
    double shift = 0.0;
    Vector a = to_y(row.coeffs, shift);
    const double rhs = row.rhs - shift;
    if (row.sense != RowSense::GreaterEqual) sf.rows.emplace_back(a, rhs);
    if (row.sense != RowSense::LessEqual) sf.rows.emplace_back(-a, -rhs);
  }
  for (const auto& [col, bound] : upper_rows) {
    Vector a = Vector::Zero(sf.width);
    a[col] = 1.0;
    sf.rows.emplace_back(std::move(a), bound);
  }
  double shift = 0.0;
  sf.gain = -to_y(lp.objective, shift);
  sf.constant = shift;
  return sf;
}

// Dictionary-form tableau. Rows 0..m-1 are constraints, row m the phase-2
// objective, row m+1 the phase-1 objective. Column n is the phase-1
// artificial variable, column n+1 the right-hand side. Labels: structural
// columns 0..n-1, slacks n..n+m-1, artificial -1.
class Tableau {
 public:
  Tableau(const StandardForm& sf, const SimplexOptions& opt, std::size_t pivot_limit,
          std::size_t bland_threshold)
      : m_(static_cast<int>(sf.rows.size())),
        n_(sf.width),
        d_(RowMajor::Zero(m_ + 2, n_ + 2)),
        basis_(static_cast<std::size_t>(m_)),
        nonbasis_(static_cast<std::size_t>(n_ + 1)),
        opt_(opt),
        pivot_limit_(pivot_limit),
        bland_threshold_(bland_threshold) {
    for (int i = 0; i < m_; ++i) {
      d_.row(i).head(n_) = sf.rows[static_cast<std::size_t>(i)].first.transpose();
      d_(i, n_) = -1.0;
      d_(i, n_ + 1) = sf.rows[static_cast<std::size_t>(i)].second;
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
    for (int j = 0; j < n_; ++j) {
      nonbasis_[static_cast<std::size_t>(j)] = j;
      d_(m_, j) = -sf.gain[j];
    }
    nonbasis_[static_cast<std::size_t>(n_)] = -1;
    d_(m_ + 1, n_) = 1.0;
  }

  // Returns false if phase 1 proves infeasibility.
  bool phase_one() {
    if (m_ == 0) return true;
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (d_(i, n_ + 1) < d_(r, n_ + 1)) r = i;
    }
    if (d_(r, n_ + 1) >= -opt_.feasibility_tol) return true;
    pivot(r, n_);
    run(/*objective_row=*/m_ + 1, /*allow_artificial=*/true, /*trace=*/nullptr);
    if (d_(m_ + 1, n_ + 1) < -opt_.feasibility_tol) return false;
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] != -1) continue;
      int s = -1;
      for (int j = 0; j < n_ + 1; ++j) {
        if (nonbasis_[static_cast<std::size_t>(j)] == -1) continue;
        if (s == -1 || std::abs(d_(i, j)) > std::abs(d_(i, s))) s = j;
      }
      if (s >= 0 && std::abs(d_(i, s)) > opt_.pivot_tol) pivot(i, s);
    }
    return true;
  }

  // Returns false if the phase-2 objective is unbounded.
  bool phase_two(std::vector<double>* trace, double constant) {
    constant_ = constant;
    return run(m_, /*allow_artificial=*/false, trace);
  }

  Vector primal() const {
    Vector y = Vector::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      const int label = basis_[static_cast<std::size_t>(i)];
      if (label >= 0 && label < n_) y[label] = d_(i, n_ + 1);
    }
    return y;
  }

  std::size_t pivots() const noexcept { return pivots_; }

 private:
  bool run(int objective_row, bool allow_artificial, std::vector<double>* trace) {
    for (;;) {
      const bool bland = degenerate_ >= bland_threshold_;
      int s = -1;
      for (int j = 0; j < n_ + 1; ++j) {
        const int label = nonbasis_[static_cast<std::size_t>(j)];
        if (!allow_artificial && label == -1) continue;
        const double rc = d_(objective_row, j);
        if (rc >= -opt_.optimality_tol) continue;
        if (s == -1) {
          s = j;
          continue;
        }
        const int best = nonbasis_[static_cast<std::size_t>(s)];
        if (bland) {
          if (label < best) s = j;
        } else if (rc < d_(objective_row, s) || (rc == d_(objective_row, s) && label < best)) {
          s = j;
        }
      }
      if (s == -1) return true;

      int r = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = d_(i, s);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = d_(i, n_ + 1) / a;
        if (r == -1 || ratio < best_ratio ||
            (ratio == best_ratio &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == -1) return false;
      if (best_ratio <= opt_.feasibility_tol) ++degenerate_;
      pivot(r, s);
      if (trace != nullptr) trace->push_back(constant_ - d_(m_, n_ + 1));
    }
  }

  void pivot(int r, int s) {
    if (++pivots_ > pivot_limit_) {
      throw NumericalFailure("simplex exceeded its pivot limit of " +
                             std::to_string(pivot_limit_));
    }
    const double inv = 1.0 / d_(r, s);
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double f = d_(i, s) * inv;
      if (f == 0.0) continue;
      d_.row(i) -= f * d_.row(r);
      d_(i, s) = d_(r, s) * f;
    }
    d_.row(r) *= inv;
    d_(r, s) = 1.0;
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) d_(i, s) *= -inv;
    }
    d_(r, s) = inv;
    std::swap(basis_[static_cast<std::size_t>(r)], nonbasis_[static_cast<std::size_t>(s)]);
  }

  int m_;
  int n_;
  RowMajor d_;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
  SimplexOptions opt_;
  std::size_t pivot_limit_;
  std::size_t bland_threshold_;
  std::size_t pivots_ = 0;
  std::size_t degenerate_ = 0;
  double constant_ = 0.0;
};

Vector recover(const LinearProgram& lp, const StandardForm& sf, const Vector& y) {
  Vector u(static_cast<Eigen::Index>(lp.num_vars()));
  for (std::size_t i = 0; i < sf.columns.size(); ++i) {
    const ColumnMap& cm = sf.columns[i];
    double v = cm.base + cm.sign * y[cm.plus];
    if (cm.minus >= 0) v -= y[cm.minus];
    const auto k = static_cast<Eigen::Index>(i);
    u[k] = std::clamp(v, lp.lower[k], lp.upper[k]);
  }
  return u;
}

}  // namespace

LPSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  const std::size_t size = lp.num_vars() + lp.rows.size();
  const StandardForm sf = to_standard_form(lp);
  Tableau tab(sf, options, 10000 * std::max<std::size_t>(size, 1), 5 * size);

  LPSolution sol;
  if (!tab.phase_one()) {
    sol.status = LPStatus::Infeasible;
    sol.pivots = tab.pivots();
    return sol;
  }
  const bool bounded =
      tab.phase_two(options.record_trace ? &sol.objective_trace : nullptr, sf.constant);
  sol.status = bounded ? LPStatus::Optimal : LPStatus::Unbounded;
  sol.pivots = tab.pivots();
  if (bounded) {
    sol.point = recover(lp, sf, tab.primal());
    sol.objective = lp.objective.dot(sol.point);
  }
  return sol;
}

bool check_feasible(std::span<const LinearConstraint> rows, const Vector& lower,
                    const Vector& upper, const SimplexOptions& options) {
  LinearProgram lp;
  lp.objective = Vector::Zero(lower.size());
  lp.rows.assign(rows.begin(), rows.end());
  lp.lower = lower;
  lp.upper = upper;
  lp.validate();
  const std::size_t size = lp.num_vars() + lp.rows.size();
  const StandardForm sf = to_standard_form(lp);
  Tableau tab(sf, options, 10000 * std::max<std::size_t>(size, 1), 5 * size);
  return tab.phase_one();
}

}  // namespace reluinv
