#include "reluinv/subproblems.hpp"

#include <algorithm>
#include <set>

#include "reluinv/errors.hpp"

namespace reluinv {

const CutRecord& CutPool::add(const Network& net, const LossSpec& loss, const Vector& x) {
  const ForwardResult fr = forward(net, x);
  const LossGradient lg = loss_and_gradient(net, loss, x);
  PatternAndBoundary pb = pattern_of(net, fr.trace, tau_);
  CutRecord rec{records_.size(), x, lg.value, lg.gradient, std::move(pb.pattern),
                std::move(pb.boundary)};
  records_.push_back(std::move(rec));
  if (records_.size() == 1 || records_.back().value < records_[incumbent_].value) {
    incumbent_ = records_.size() - 1;
  }
  return records_.back();
}

namespace {

// Variables (x, v) when `epigraph`, else x alone. Box bounds on x, v free,
// X rows padded with a zero for v.
LinearProgram base_program(const FeasibleSet& domain, bool epigraph) {
  const auto n = static_cast<Eigen::Index>(domain.dim());
  const Eigen::Index d = epigraph ? n + 1 : n;
  LinearProgram lp;
  lp.objective = Vector::Zero(d);
  lp.lower = Vector::Constant(d, -kInfinity);
  lp.upper = Vector::Constant(d, kInfinity);
  lp.lower.head(n) = domain.lower;
  lp.upper.head(n) = domain.upper;
  for (const LinearConstraint& c : domain.constraints) {
    Vector row = Vector::Zero(d);
    row.head(n) = c.coeffs;
    lp.rows.push_back({std::move(row), c.rhs, c.sense});
  }
  return lp;
}

// v >= value + gradient^T (x - point)  <=>  gradient^T x - v <= gradient^T point - value
LinearConstraint epigraph_row(const Vector& point, double value, const Vector& gradient) {
  const auto n = gradient.size();
  Vector row(n + 1);
  row.head(n) = gradient;
  row[n] = -1.0;
  return {std::move(row), gradient.dot(point) - value, RowSense::LessEqual};
}

LinearConstraint pad(const LinearConstraint& c) {
  const auto n = c.coeffs.size();
  Vector row = Vector::Zero(n + 1);
  row.head(n) = c.coeffs;
  return {std::move(row), c.rhs, c.sense};
}

OaSolution finish(const LinearProgram& lp, std::vector<std::size_t> cuts, const char* what) {
  const LPSolution sol = solve(lp);
  if (sol.status == LPStatus::Infeasible) {
    throw InvalidInput(std::string(what) + ": feasible set X is empty");
  }
  if (sol.status == LPStatus::Unbounded) {
    throw NumericalFailure(std::string(what) + ": LP unbounded (no objective cuts?)");
  }
  const auto n = static_cast<Eigen::Index>(lp.num_vars()) - 1;
  return {sol.point.head(n), sol.point[n], std::move(cuts), lp.rows.size()};
}

}  // namespace

std::vector<std::size_t> select_k_of_incumbent(const CutPool& pool,
                                               std::span<const RegionSystem> neighbor_regions,
                                               double tau) {
  std::vector<std::size_t> out;
  for (const CutRecord& rec : pool.records()) {
    const bool member = std::any_of(neighbor_regions.begin(), neighbor_regions.end(),
                                    [&](const RegionSystem& r) { return r.contains(rec.point, tau); });
    if (member) out.push_back(rec.index);
  }
  return out;
}

std::vector<std::size_t> select_k_of_incumbent(const CutPool& pool, const Network& net,
                                               const FeasibleSet& domain,
                                               std::size_t pattern_cap) {
  if (pool.empty()) throw InvalidInput("cut pool is empty");
  std::vector<RegionSystem> regions;
  for (const ActivationPattern& p :
       neighbor_patterns(net, domain, pool.incumbent().point, pool.tau(), pattern_cap)) {
    regions.push_back(region_system(net, p));
  }
  return select_k_of_incumbent(pool, regions, pool.tau());
}

std::vector<std::size_t> select_k_star(const CutPool& pool, double gamma_c, std::size_t latest) {
  if (pool.empty()) throw InvalidInput("cut pool is empty");
  const CutRecord& best = pool.incumbent();
  std::vector<std::size_t> out;
  for (const CutRecord& rec : pool.records()) {
    if (rec.index == latest) {
      out.push_back(rec.index);
      continue;
    }
    const bool near = (best.point - rec.point).norm() <= gamma_c;
    const bool valid_at_incumbent = rec.linearization(best.point) < best.value;
    if (near && valid_at_incumbent) out.push_back(rec.index);
  }
  return out;
}

OaSolution solve_cut_lp(const CutPool& pool, std::span<const std::size_t> cuts,
                        const FeasibleSet& domain) {
  LinearProgram lp = base_program(domain, true);
  lp.objective[lp.objective.size() - 1] = 1.0;
  for (std::size_t k : cuts) {
    const CutRecord& rec = pool[k];
    lp.rows.push_back(epigraph_row(rec.point, rec.value, rec.gradient));
  }
  return finish(lp, {cuts.begin(), cuts.end()}, "outer approximation");
}

OaSolution build_and_solve_noa(const CutPool& pool, std::span<const std::size_t> k_of_incumbent,
                               const FeasibleSet& domain) {
  if (k_of_incumbent.empty()) throw InvalidInput("NOA needs at least one cut");
  return solve_cut_lp(pool, k_of_incumbent, domain);
}

OaSolution build_and_solve_noa(const CutPool& pool, const Network& net, const FeasibleSet& domain,
                               std::size_t pattern_cap) {
  const auto k = select_k_of_incumbent(pool, net, domain, pattern_cap);
  return build_and_solve_noa(pool, k, domain);
}

OaSolution build_and_solve_dloa(const CutPool& pool, const FeasibleSet& domain, double gamma_c,
                                std::size_t latest) {
  const auto k = select_k_star(pool, gamma_c, latest);
  return solve_cut_lp(pool, k, domain);
}

std::optional<OaSolution> build_and_solve_rloa(const CutPool& pool, const FeasibleSet& domain,
                                               const RegionSystem& region, const Network& net,
                                               const LossSpec& loss, double tau) {
  LinearProgram lp = base_program(domain, true);
  lp.objective[lp.objective.size() - 1] = 1.0;
  std::vector<std::size_t> cuts;
  std::set<std::size_t> cut_neurons;
  for (const CutRecord& rec : pool.records()) {
    if (region.contains(rec.point, tau)) {
      const LossGradient lg = loss_and_gradient_in_pattern(net, loss, rec.point, region.pattern);
      lp.rows.push_back(epigraph_row(rec.point, lg.value, lg.gradient));
      cuts.push_back(rec.index);
    } else {
      try {
        const FeasibilityCut fc = feasibility_cut(net, region, rec.point, tau);
        if (cut_neurons.insert(fc.neuron).second) lp.rows.push_back(pad(fc.to_constraint()));
      } catch (const NoDiscrepancy&) {
        // only reachable through rounding right at the region boundary
      }
    }
  }
  for (const HalfSpace& h : region.inequalities) lp.rows.push_back(pad(h.to_constraint()));

  const LPSolution sol = solve(lp);
  if (sol.status == LPStatus::Infeasible) return std::nullopt;
  if (sol.status == LPStatus::Unbounded) {
    throw NumericalFailure("RLOA unbounded: no observation lies in the region");
  }
  const auto n = static_cast<Eigen::Index>(domain.dim());
  return OaSolution{sol.point.head(n), sol.point[n], std::move(cuts), lp.rows.size()};
}

std::optional<OcResult> build_and_solve_oc(const Network& net, const LossSpec& loss,
                                           const Vector& x_star, const RegionSystem& region,
                                           const FeasibleSet& domain) {
  const Vector grad = gradient_in_pattern(net, loss, x_star, region.pattern);
  LinearProgram lp = base_program(domain, false);
  lp.objective = grad;
  for (const HalfSpace& h : region.inequalities) lp.rows.push_back(h.to_constraint());
  const LPSolution sol = solve(lp);
  if (sol.status == LPStatus::Infeasible) return std::nullopt;
  if (sol.status == LPStatus::Unbounded) throw NumericalFailure("OC LP unbounded on a bounded box");
  return OcResult{grad.dot(sol.point - x_star), sol.point};
}

std::optional<Vector> nearest_region_point(const Vector& x, const RegionSystem& region,
                                           const FeasibleSet& domain) {
  if (region.contains(x, 0.0) && domain.contains(x, 0.0)) return x;
  // variables (u, s): min s  s.t.  -s <= u_i - x_i <= s, u in X n Y(N)
  LinearProgram lp = base_program(domain, true);
  const auto n = static_cast<Eigen::Index>(domain.dim());
  lp.objective[n] = 1.0;
  lp.lower[n] = 0.0;
  for (const HalfSpace& h : region.inequalities) lp.rows.push_back(pad(h.to_constraint()));
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector row = Vector::Zero(n + 1);
    row[i] = 1.0;
    row[n] = -1.0;
    lp.rows.push_back({row, x[i], RowSense::LessEqual});
    row[n] = 1.0;
    lp.rows.push_back({std::move(row), x[i], RowSense::GreaterEqual});
  }
  const LPSolution sol = solve(lp);
  if (sol.status != LPStatus::Optimal) return std::nullopt;
  return Vector(sol.point.head(n));
}

}  // namespace reluinv
