#include "reluinv/pgd.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "reluinv/errors.hpp"

namespace reluinv {

namespace {

Vector project_onto_row(const Vector& x, const LinearConstraint& c) {
  const double norm2 = c.coeffs.squaredNorm();
  if (norm2 == 0.0) return x;
  const double lhs = c.coeffs.dot(x);
  double shift = 0.0;
  switch (c.sense) {
    case RowSense::Equal:
      shift = lhs - c.rhs;
      break;
    case RowSense::LessEqual:
      shift = std::max(0.0, lhs - c.rhs);
      break;
    case RowSense::GreaterEqual:
      shift = std::min(0.0, lhs - c.rhs);
      break;
  }
  return x - (shift / norm2) * c.coeffs;
}

}  // namespace

Vector project(const Vector& x, const FeasibleSet& domain) {
  if (x.size() != domain.lower.size()) throw InvalidInput("projection: dimension mismatch");
  if (!domain.has_constraints()) return domain.clamp(x);

  constexpr std::size_t kMaxRounds = 100000;
  constexpr double kTol = 1e-10;
  const std::size_t sets = domain.constraints.size() + 1;
  std::vector<Vector> corrections(sets, Vector::Zero(x.size()));
  Vector cur = x;
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    const Vector prev = cur;
    // the iterate can stall for whole rounds while corrections still move,
    // so both must settle
    double correction_change = 0.0;
    for (std::size_t i = 0; i < sets; ++i) {
      const Vector shifted = cur + corrections[i];
      // box last so the returned point satisfies the bounds exactly
      const Vector next = i + 1 < sets ? project_onto_row(shifted, domain.constraints[i])
                                       : domain.clamp(shifted);
      const Vector updated = shifted - next;
      correction_change += (updated - corrections[i]).squaredNorm();
      corrections[i] = updated;
      cur = next;
    }
    if ((cur - prev).norm() < kTol && std::sqrt(correction_change) < kTol) return cur;
  }
  throw NumericalFailure("projection did not converge within 100000 Dykstra rounds");
}

void PgdConfig::validate() const {
  if (!(scale > 0.0)) throw InvalidInput("PGD scale s must be positive");
  if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("PGD step alpha must lie in (0, 1]");
  if (stall_limit < 1) throw InvalidInput("PGD stall limit must be at least 1");
  if (projection_period < 1) throw InvalidInput("PGD projection period must be at least 1");
  if (max_iterations < 1) throw InvalidInput("PGD needs at least one iteration");
}

RunResult run_pgd(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                  const Vector& x0, const PgdConfig& config) {
  config.validate();
  domain.validate();
  if (static_cast<std::size_t>(x0.size()) != domain.dim() || domain.dim() != net.input_dim()) {
    throw InvalidInput("PGD: start point, feasible set and network dimensions differ");
  }
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

  RunResult result;
  Vector x = x0;
  if (!domain.contains(x)) {
    x = project(x, domain);
    result.warnings.push_back("start point outside X was projected");
  }
  LossGradient cur = loss_and_gradient(net, loss, x);
  result.initial_value = cur.value;
  result.x = x;
  result.value = cur.value;
  double running_min = cur.value;
  std::size_t stall = 0;
  result.status = RunStatus::IterationLimit;

  auto log = [&](std::size_t k, const char* status) {
    result.log.push_back({k, elapsed(), Phase::Primal, cur.value, result.value, config.scale, 0,
                          status});
  };
  log(0, "start");

  std::size_t k = 1;
  for (; k <= config.max_iterations; ++k) {
    const bool projecting = k % config.projection_period == 0;
    Vector target = x - config.scale * cur.gradient;
    if (projecting) target = project(target, domain);
    Vector next = x + config.step * (target - x);
    if (projecting && config.step < 1.0) next = project(next, domain);
    if (next == x) {
      result.status = RunStatus::FixedPoint;
      log(k, to_string(result.status));
      break;
    }
    x = std::move(next);
    cur = loss_and_gradient(net, loss, x);

    if (projecting && cur.value < result.value) {
      result.value = cur.value;
      result.x = x;
    }
    const bool improved = cur.value < running_min;
    if (improved) {
      running_min = cur.value;
      stall = 0;
    } else {
      ++stall;
    }
    if (stall >= config.stall_limit) {
      result.status = RunStatus::Stalled;
      log(k, to_string(result.status));
      break;
    }
    if (config.time_limit_s > 0.0 && elapsed() >= config.time_limit_s) {
      result.status = RunStatus::TimeLimit;
      log(k, to_string(result.status));
      break;
    }
    log(k, improved ? "improved" : "no_improvement");
  }
  result.iterations = std::min(k, config.max_iterations);

  // final projection
  const Vector xf = project(x, domain);
  const double gf = loss_and_gradient(net, loss, xf).value;
  if (gf < result.value) {
    result.value = gf;
    result.x = xf;
  }
  if (!result.log.empty()) result.log.back().g_best = result.value;
  result.time_s = elapsed();
  return result;
}

}  // namespace reluinv
