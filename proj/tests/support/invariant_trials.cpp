#include "invariant_trials.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "reluinv/ogo.hpp"
#include "reluinv/pgd.hpp"
#include "test_oracles.hpp"

namespace reluinv::oracle {

namespace {

void note(InvariantReport& r, const std::string& what, std::size_t trial) {
  if (r.examples.size() < 5) r.examples.push_back("trial " + std::to_string(trial) + ": " + what);
}

}  // namespace

InvariantReport ogo_invariant_trials(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> width(2, 6);
  std::uniform_int_distribution<int> dim(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  InvariantReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto n = static_cast<std::size_t>(dim(rng));
    const Network net = random_network({n, static_cast<std::size_t>(width(rng)),
                                        static_cast<std::size_t>(width(rng)), 1},
                                       rng);
    const FeasibleSet dom = FeasibleSet::box(Vector::Zero(static_cast<Eigen::Index>(n)),
                                             Vector::Ones(static_cast<Eigen::Index>(n)));
    const LossSpec loss{uniform_box(rng, Vector::Constant(1, -1.0), Vector::Ones(1))};
    const Vector x0 = uniform_box(rng, dom.lower, dom.upper);

    OgoConfig cfg;
    cfg.epsilon = std::pow(10.0, -3.0 - 6.0 * unit(rng));
    cfg.step = 0.005 + 0.5 * unit(rng);
    cfg.shrink = 0.5 + 0.45 * unit(rng);
    cfg.expand = 1.1 + unit(rng);
    cfg.neighborhood = 0.05 + 0.5 * unit(rng);
    cfg.max_iterations = 60;
    const double lo = cfg.resolved_step_min(n);

    double prev_best = 0.0;
    bool first = true;
    double running_min = 0.0;
    const auto obs = [&](const OgoIterationEvent& e) {
      ++rep.events;
      if (first) {
        running_min = std::min(e.value, e.best_value);
        prev_best = e.best_value;
        first = false;
      }
      running_min = std::min(running_min, e.value);
      if (e.step < lo || e.step > cfg.step_max) {
        ++rep.step_violations;
        note(rep, "step " + std::to_string(e.step) + " out of bounds", t);
      }
      if (e.best_value > prev_best || e.best_value != running_min) {
        ++rep.incumbent_violations;
        note(rep, "incumbent not the running minimum", t);
      }
      if (e.improved && e.certified != 0) {
        ++rep.reset_violations;
        note(rep, "certified record not cleared after improvement", t);
      }
      prev_best = e.best_value;
    };
    const OgoResult r = run_ogo(net, loss, dom, x0, cfg, obs);
    if (r.value > r.initial_value) {
      ++rep.incumbent_violations;
      note(rep, "final value above the start value", t);
    }
    ++rep.trials;
  }
  return rep;
}

InvariantReport projection_trials(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> nrows(0, 3);
  InvariantReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    const int n = dim(rng);
    const Vector lo = uniform_box(rng, Vector::Constant(n, -2.0), Vector::Zero(n));
    const Vector hi = lo + uniform_box(rng, Vector::Constant(n, 0.1), Vector::Constant(n, 2.0));
    FeasibleSet dom = FeasibleSet::box(lo, hi);
    // rows through a known interior point keep the set nonempty
    const Vector inner = 0.5 * (lo + hi);
    const int rows = nrows(rng);
    for (int k = 0; k < rows; ++k) {
      const Vector a = uniform_box(rng, Vector::Constant(n, -1.0), Vector::Ones(n));
      dom.constraints.push_back({a, a.dot(inner) + 0.1, RowSense::LessEqual});
    }
    const Vector x = uniform_box(rng, Vector::Constant(n, -4.0), Vector::Constant(n, 4.0));
    const Vector p = project(x, dom);
    const Vector pp = project(p, dom);
    if ((pp - p).norm() > 1e-9 || !dom.contains(p, 1e-8)) {
      ++rep.projection_violations;
      std::ostringstream os;
      os << "projection moved by " << (pp - p).norm();
      note(rep, os.str(), t);
    }
    ++rep.trials;
  }
  return rep;
}

}  // namespace reluinv::oracle
