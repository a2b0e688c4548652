#include "reluinv/region.hpp"

#include <algorithm>

#include "reluinv/errors.hpp"

namespace reluinv {

double HalfSpace::violation(const Vector& x) const {
  const double v = form.evaluate(x);
  return sense == HalfSpaceSense::NonNegative ? std::max(0.0, -v) : std::max(0.0, v);
}

LinearConstraint HalfSpace::to_constraint() const {
  return {form.row, -form.offset,
          sense == HalfSpaceSense::NonNegative ? RowSense::GreaterEqual : RowSense::LessEqual};
}

bool RegionSystem::contains(const Vector& x, double tol) const {
  return std::all_of(inequalities.begin(), inequalities.end(),
                     [&](const HalfSpace& h) { return h.violation(x) <= tol; });
}

std::vector<LinearConstraint> RegionSystem::constraints() const {
  std::vector<LinearConstraint> out;
  out.reserve(inequalities.size());
  for (const HalfSpace& h : inequalities) out.push_back(h.to_constraint());
  return out;
}

RegionSystem region_system(const Network& net, const ActivationPattern& pattern) {
  RegionSystem region{pattern, {}};
  auto forms = masked_affine_all(net, pattern);
  region.inequalities.reserve(forms.size());
  for (std::size_t j = 0; j < forms.size(); ++j) {
    region.inequalities.push_back(
        {std::move(forms[j]),
         pattern.is_active(j) ? HalfSpaceSense::NonNegative : HalfSpaceSense::NonPositive});
  }
  return region;
}

bool contains(const RegionSystem& region, const Vector& x, double tol) {
  return region.contains(x, tol);
}

bool region_feasible(const RegionSystem& region, const FeasibleSet& domain) {
  std::vector<LinearConstraint> rows = region.constraints();
  rows.insert(rows.end(), domain.constraints.begin(), domain.constraints.end());
  return check_feasible(rows, domain.lower, domain.upper);
}

NeighborPatternEnumerator::NeighborPatternEnumerator(const Network& net,
                                                     const FeasibleSet& domain,
                                                     const Vector& x_star, double tau,
                                                     std::size_t cap)
    : net_(&net), domain_(&domain), base_(pattern_of(net, x_star, tau)) {
  if (base_.boundary.size() > cap || base_.boundary.size() >= 63) {
    throw PatternCapExceeded(base_.boundary.size(), cap);
  }
  total_ = std::uint64_t{1} << base_.boundary.size();
}

std::optional<ActivationPattern> NeighborPatternEnumerator::next() {
  const std::size_t k = base_.boundary.size();
  while (next_ < total_) {
    const std::uint64_t assignment = next_++;
    ActivationPattern p = base_.pattern;
    for (std::size_t i = 0; i < k; ++i) {
      // first boundary neuron is the most significant digit
      const bool active = ((assignment >> (k - 1 - i)) & 1U) != 0;
      p.set(base_.boundary.neurons[i], active);
    }
    if (k == 0 || region_feasible(region_system(*net_, p), *domain_)) return p;
  }
  return std::nullopt;
}

std::vector<ActivationPattern> neighbor_patterns(const Network& net, const FeasibleSet& domain,
                                                 const Vector& x_star, double tau,
                                                 std::size_t cap) {
  NeighborPatternEnumerator it(net, domain, x_star, tau, cap);
  std::vector<ActivationPattern> out;
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

std::size_t discrepancy_node(const ActivationPattern& reference,
                             const ActivationPattern& observed) {
  if (reference.size() != observed.size()) {
    throw InvalidInput("activation patterns cover different neuron counts");
  }
  for (std::size_t j = 0; j < reference.size(); ++j) {
    if (reference.is_active(j) != observed.is_active(j)) return j;
  }
  throw NoDiscrepancy("activation patterns are identical");
}

FeasibilityCut feasibility_cut(const Network& net, const ActivationPattern& region_pattern,
                               const Vector& x_out, double tau) {
  return feasibility_cut(net, region_system(net, region_pattern), x_out, tau);
}

FeasibilityCut feasibility_cut(const Network& net, const RegionSystem& region, const Vector& x_out,
                               double tau) {
  if (region.contains(x_out, tau)) {
    throw NoDiscrepancy("point lies in the region within tolerance; no separating cut");
  }
  const ForwardResult fr = forward(net, x_out);
  const ActivationPattern observed = pattern_of(net, fr.trace, 0.0).pattern;
  const std::size_t jd = discrepancy_node(region.pattern, observed);
  const AffineForm& form = region.inequalities.at(jd).form;

  FeasibilityCut cut;
  cut.neuron = jd;
  if (region.pattern.is_active(jd)) {
    cut.r = -form.row;
    cut.d = -form.offset;
  } else {
    cut.r = form.row;
    cut.d = form.offset;
  }
  if (!(cut.value(x_out) > 0.0)) {
    throw NoDiscrepancy("discrepancy node " + std::to_string(jd) + " does not separate the point");
  }
  return cut;
}

bool precheck_descent(const Network& net, const LossSpec& loss, const Vector& x_star,
                      const RegionSystem& region, std::span<const Vector> observations,
                      double tau) {
  bool have_gradient = false;
  Vector grad;
  for (const Vector& xk : observations) {
    if (!region.contains(xk, tau)) continue;
    if (!have_gradient) {
      grad = gradient_in_pattern(net, loss, x_star, region.pattern);
      have_gradient = true;
    }
    if (grad.dot(xk - x_star) < 0.0) return true;
  }
  return false;
}

bool precheck_descent(const Network& net, const LossSpec& loss, const Vector& x_star,
                      const ActivationPattern& pattern, std::span<const Vector> observations,
                      double tau) {
  return precheck_descent(net, loss, x_star, region_system(net, pattern), observations, tau);
}

}  // namespace reluinv
