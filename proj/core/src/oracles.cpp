#include "reluinv/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reluinv/errors.hpp"
#include "reluinv/region.hpp"

namespace reluinv {

namespace {

constexpr int kKnotBisections = 60;

std::size_t steps_for(double lo, double hi, double resolution) {
  const double steps = std::ceil((hi - lo) / resolution - 1e-9);
  if (!(steps < 1e8)) throw InvalidInput("grid oracle: resolution too fine for the box");
  return static_cast<std::size_t>(std::max(1.0, steps));
}

double coordinate(double lo, double hi, std::size_t i, std::size_t steps) {
  if (i == steps) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps);
}

// Points in [a, b] where the sign pattern changes, found by bisection.
void collect_knots(const Network& net, double a, double b, const ActivationPattern& pa,
                   const ActivationPattern& pb, std::vector<double>& out) {
  Vector x(1);
  for (int it = 0; it < kKnotBisections && b - a > 0.0; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    x[0] = mid;
    const ActivationPattern pm = pattern_of(net, x, 0.0).pattern;
    if (pm == pa) {
      a = mid;
    } else if (pm == pb) {
      b = mid;
    } else {
      // several knots in the interval: split
      collect_knots(net, a, mid, pa, pm, out);
      collect_knots(net, mid, b, pm, pb, out);
      return;
    }
  }
  out.push_back(b);
}

GridOracleResult grid_1d(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                         double resolution) {
  const double lo = domain.lower[0];
  const double hi = domain.upper[0];
  std::vector<double> xs;
  if (hi > lo) {
    const std::size_t steps = steps_for(lo, hi, resolution);
    for (std::size_t i = 0; i <= steps; ++i) xs.push_back(coordinate(lo, hi, i, steps));
  } else {
    xs.push_back(lo);
  }

  std::vector<double> knots;
  Vector x(1);
  x[0] = xs.front();
  ActivationPattern prev = pattern_of(net, x, 0.0).pattern;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    x[0] = xs[i];
    ActivationPattern cur = pattern_of(net, x, 0.0).pattern;
    if (!(cur == prev)) collect_knots(net, xs[i - 1], xs[i], prev, cur, knots);
    prev = std::move(cur);
  }
  xs.insert(xs.end(), knots.begin(), knots.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<GridPoint> pts;
  for (double v : xs) {
    x[0] = v;
    if (!domain.contains(x, 0.0)) continue;
    pts.push_back({x, loss.value(forward(net, x).output)});
  }
  if (pts.empty()) throw InvalidInput("grid oracle: no grid point satisfies X");

  GridOracleResult res;
  res.evaluated = pts.size();
  std::size_t best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].value < pts[best].value) best = i;
    const bool left_ok = i == 0 || pts[i].value <= pts[i - 1].value;
    const bool right_ok = i + 1 == pts.size() || pts[i].value <= pts[i + 1].value;
    if (left_ok && right_ok) res.local_minima.push_back(pts[i]);
  }
  res.x_best = pts[best].x;
  res.g_best = pts[best].value;
  return res;
}

GridOracleResult grid_2d(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                         double resolution) {
  std::size_t steps[2];
  for (int d = 0; d < 2; ++d) {
    steps[d] = domain.upper[d] > domain.lower[d]
                   ? steps_for(domain.lower[d], domain.upper[d], resolution)
                   : 0;
  }
  const std::size_t nx = steps[0] + 1;
  const std::size_t ny = steps[1] + 1;
  if (nx * ny > 50'000'000) throw InvalidInput("grid oracle: resolution too fine for the box");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values(nx * ny, nan);
  auto point = [&](std::size_t i, std::size_t j) {
    Vector x(2);
    x[0] = steps[0] ? coordinate(domain.lower[0], domain.upper[0], i, steps[0]) : domain.lower[0];
    x[1] = steps[1] ? coordinate(domain.lower[1], domain.upper[1], j, steps[1]) : domain.lower[1];
    return x;
  };

  GridOracleResult res;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const Vector x = point(i, j);
      if (!domain.contains(x, 0.0)) continue;
      const double g = loss.value(forward(net, x).output);
      values[i * ny + j] = g;
      ++res.evaluated;
      if (g < best) {
        best = g;
        res.x_best = x;
      }
    }
  }
  if (res.evaluated == 0) throw InvalidInput("grid oracle: no grid point satisfies X");
  res.g_best = best;

  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double g = values[i * ny + j];
      if (std::isnan(g)) continue;
      bool minimal = true;
      for (int di = -1; di <= 1 && minimal; ++di) {
        for (int dj = -1; dj <= 1 && minimal; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(nx) ||
              jj >= static_cast<std::ptrdiff_t>(ny)) {
            continue;
          }
          const double h = values[static_cast<std::size_t>(ii) * ny + static_cast<std::size_t>(jj)];
          if (!std::isnan(h) && h < g) minimal = false;
        }
      }
      if (minimal) res.local_minima.push_back({point(i, j), g});
    }
  }
  return res;
}

}  // namespace

GridOracleResult oracle_grid(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                             double resolution) {
  domain.validate();
  if (domain.dim() != net.input_dim()) throw InvalidInput("grid oracle: dimension mismatch");
  if (!(resolution > 0.0)) throw InvalidInput("grid oracle: resolution must be positive");
  if (domain.dim() == 1) return grid_1d(net, loss, domain, resolution);
  if (domain.dim() == 2) return grid_2d(net, loss, domain, resolution);
  throw InvalidInput("grid oracle supports at most 2 inputs");
}

RegionOracleResult oracle_region_fw(const Network& net, const LossSpec& loss,
                                    const FeasibleSet& domain, const ActivationPattern& pattern,
                                    std::size_t iterations) {
  domain.validate();
  if (domain.dim() != net.input_dim()) throw InvalidInput("region oracle: dimension mismatch");
  const RegionSystem region = region_system(net, pattern);

  LinearProgram lp;
  lp.lower = domain.lower;
  lp.upper = domain.upper;
  lp.rows = region.constraints();
  lp.rows.insert(lp.rows.end(), domain.constraints.begin(), domain.constraints.end());
  lp.objective = Vector::Zero(static_cast<Eigen::Index>(domain.dim()));

  const LPSolution start = solve(lp);
  if (start.status != LPStatus::Optimal) {
    throw InvalidInput("region oracle: X intersected with the region is empty");
  }

  RegionOracleResult res;
  Vector x = start.point;
  LossGradient cur = loss_and_gradient_in_pattern(net, loss, x, pattern);
  res.x_best = x;
  res.g_best = cur.value;
  res.lower_bound = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < iterations; ++t) {
    lp.objective = cur.gradient;
    const LPSolution vertex = solve(lp);
    if (vertex.status != LPStatus::Optimal) {
      throw NumericalFailure("region oracle: linear minimization failed");
    }
    res.gap = std::max(0.0, cur.gradient.dot(x - vertex.point));
    res.lower_bound = std::max(res.lower_bound, cur.value - res.gap);
    res.iterations = t + 1;
    if (res.gap == 0.0) break;
    const double step = 2.0 / (static_cast<double>(t) + 2.0);
    x += step * (vertex.point - x);
    cur = loss_and_gradient_in_pattern(net, loss, x, pattern);
    if (cur.value < res.g_best) {
      res.g_best = cur.value;
      res.x_best = x;
    }
  }
  return res;
}

}  // namespace reluinv
