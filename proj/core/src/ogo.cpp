#include "reluinv/ogo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_set>

#include "reluinv/errors.hpp"
#include "reluinv/pgd.hpp"

namespace reluinv {

double OgoConfig::resolved_step_min(std::size_t input_dim) const {
  return step_min ? *step_min : epsilon * std::sqrt(static_cast<double>(input_dim));
}

void OgoConfig::validate(std::size_t input_dim) const {
  if (!(epsilon > 0.0)) throw InvalidInput("OGO epsilon must be positive");
  const double lo = resolved_step_min(input_dim);
  if (!(lo > 0.0 && lo <= step && step <= step_max)) {
    throw InvalidInput("OGO step sizes must satisfy 0 < step_min <= step <= step_max");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidInput("OGO shrink factor must lie in (0, 1)");
  if (!(expand > 1.0)) throw InvalidInput("OGO expand factor must exceed 1");
  if (!(neighborhood > 0.0)) throw InvalidInput("OGO neighborhood radius must be positive");
  if (!(tau >= 0.0)) throw InvalidInput("OGO boundary tolerance must be non-negative");
  if (!(oc_tolerance >= 0.0)) throw InvalidInput("OGO descent-check tolerance must be non-negative");
  if (max_iterations < 1) throw InvalidInput("OGO needs at least one iteration");
}

namespace {

// Neighbor regions of one incumbent, built once per incumbent.
struct Neighborhood {
  std::size_t incumbent = static_cast<std::size_t>(-1);
  std::vector<RegionSystem> regions;
};

struct DualOutcome {
  std::optional<Vector> probe;
  std::size_t rows = 0;
};

class OgoRun {
 public:
  OgoRun(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
         const OgoConfig& config, const OgoObserver& observer)
      : net_(net),
        loss_(loss),
        domain_(domain),
        cfg_(config),
        observer_(observer),
        pool_(config.tau),
        step_min_(config.resolved_step_min(domain.dim())),
        t0_(Clock::now()) {}

  OgoResult run(const Vector& x0) {
    Vector x = x0;
    if (!domain_.contains(x)) {
      x = project(x, domain_);
      result_.warnings.push_back("start point outside X was projected");
    }
    pool_.add(net_, loss_, x);
    result_.initial_value = pool_.incumbent().value;
    result_.status = RunStatus::IterationLimit;
    double step = cfg_.step;
    log(0, Phase::Primal, pool_.latest().value, step, 0, "start");

    bool dual = false;
    std::size_t k = 1;
    for (; k <= cfg_.max_iterations; ++k) {
      const CutRecord& best = pool_.incumbent();
      const double g_best = best.value;
      const Vector x_best = best.point;
      OgoIterationEvent event;
      event.iter = k;

      std::optional<Vector> probe;
      std::size_t rows = 0;
      try {
        if (!dual) {
          const OaSolution dloa =
              build_and_solve_dloa(pool_, domain_, cfg_.neighborhood, pool_.size() - 1);
          event.solved_dloa = true;
          event.dloa_rows = dloa.cuts;
          rows = dloa.rows;
          if (g_best - dloa.v >= cfg_.epsilon) {
            probe = dloa.x;
          } else {
            const auto k_of = select_k_of_incumbent(pool_, neighborhood().regions, cfg_.tau);
            const OaSolution noa = build_and_solve_noa(pool_, k_of, domain_);
            rows = noa.rows;
            if (g_best - noa.v >= cfg_.epsilon) {
              probe = noa.x;
            } else {
              dual = true;
            }
          }
        }
        if (dual) {
          DualOutcome out = dual_search(x_best, g_best);
          rows = out.rows;
          probe = std::move(out.probe);
        }
      } catch (const PatternCapExceeded& e) {
        result_.status = RunStatus::PatternCapExceeded;
        result_.warnings.push_back(e.what());
        log(k, dual ? Phase::Dual : Phase::Primal, g_best, step, rows,
            to_string(result_.status));
        break;
      }

      const Phase phase = dual ? Phase::Dual : Phase::Primal;
      if (!probe) {
        result_.status = RunStatus::EpsLocalOptimal;
        log(k, phase, g_best, step, rows, to_string(result_.status));
        break;
      }

      const Vector next = domain_.clamp(x_best + step * (*probe - x_best));
      const double g_next = pool_.add(net_, loss_, next).value;
      const bool improved = g_next < g_best;
      if (improved) {
        step = std::min(cfg_.expand * step, cfg_.step_max);
        dual = false;
        certified_.clear();
      } else {
        step = std::max(step_min_, cfg_.shrink * step);
        if (step == step_min_) dual = true;
      }

      event.phase = phase;
      event.improved = improved;
      event.value = g_next;
      event.best_value = pool_.incumbent().value;
      event.step = step;
      event.certified = certified_.size();
      if (observer_) observer_(event);

      if (cfg_.time_limit_s > 0.0 && elapsed() >= cfg_.time_limit_s) {
        result_.status = RunStatus::TimeLimit;
        log(k, phase, g_next, step, rows, to_string(result_.status));
        break;
      }
      log(k, phase, g_next, step, rows, improved ? "improved" : "no_improvement");
    }
    result_.iterations = std::min(k, cfg_.max_iterations);

    const CutRecord& best = pool_.incumbent();
    result_.x = best.point;
    result_.value = best.value;
    result_.boundary = best.boundary;
    if (hood_.incumbent == best.index) result_.neighbor_count = hood_.regions.size();
    if (result_.status == RunStatus::EpsLocalOptimal) {
      result_.certified.assign(certified_.begin(), certified_.end());
      std::sort(result_.certified.begin(), result_.certified.end(),
                [](const ActivationPattern& a, const ActivationPattern& b) {
                  return a.to_string() < b.to_string();
                });
    }
    result_.time_s = elapsed();
    return std::move(result_);
  }

 private:
  using Clock = std::chrono::steady_clock;

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - t0_).count(); }

  void log(std::size_t iter, Phase phase, double g_curr, double step, std::size_t cuts,
           const char* status) {
    result_.log.push_back(
        {iter, elapsed(), phase, g_curr, pool_.incumbent().value, step, cuts, status});
  }

  const Neighborhood& neighborhood() {
    const CutRecord& best = pool_.incumbent();
    if (hood_.incumbent != best.index) {
      Neighborhood fresh;
      fresh.incumbent = best.index;
      for (const ActivationPattern& p :
           neighbor_patterns(net_, domain_, best.point, cfg_.tau, cfg_.pattern_cap)) {
        fresh.regions.push_back(region_system(net_, p));
      }
      hood_ = std::move(fresh);
    }
    return hood_;
  }

  // Walks the uncertified neighbor regions; returns the first probe found.
  DualOutcome dual_search(const Vector& x_best, double g_best) {
    const Neighborhood& hood = neighborhood();
    std::vector<Vector> observations;
    observations.reserve(pool_.size());
    for (const CutRecord& rec : pool_.records()) observations.push_back(rec.point);

    std::vector<std::size_t> order(hood.regions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<char> descent(order.size(), 0);
    for (std::size_t i : order) {
      if (certified_.contains(hood.regions[i].pattern)) continue;
      descent[i] = precheck_descent(net_, loss_, x_best, hood.regions[i], observations, cfg_.tau)
                       ? 1
                       : 0;
    }
    std::stable_partition(order.begin(), order.end(), [&](std::size_t i) { return descent[i]; });

    DualOutcome out;
    for (std::size_t i : order) {
      const RegionSystem& region = hood.regions[i];
      if (certified_.contains(region.pattern)) continue;
      const auto rloa = build_and_solve_rloa(pool_, domain_, region, net_, loss_, cfg_.tau);
      if (!rloa) {
        certified_.insert(region.pattern);
        continue;
      }
      out.rows = rloa->rows;
      if (g_best - rloa->v >= cfg_.epsilon) {
        out.probe = rloa->x;
        return out;
      }
      // the descent check is taken at the point of X n Y(N) nearest to x*
      const auto anchor = nearest_region_point(x_best, region, domain_);
      const auto oc = anchor ? build_and_solve_oc(net_, loss_, *anchor, region, domain_)
                             : std::nullopt;
      if (!oc || oc->value >= -cfg_.oc_tolerance) {
        certified_.insert(region.pattern);
        continue;
      }
      // descent exists: probe the model minimizer, or the descent vertex when
      // the model minimizer sits on x*
      const bool model_moves = (rloa->x - x_best).norm() > 1e-12 * (1.0 + x_best.norm());
      out.probe = model_moves ? rloa->x : oc->x;
      return out;
    }
    return out;
  }

  const Network& net_;
  const LossSpec& loss_;
  const FeasibleSet& domain_;
  const OgoConfig& cfg_;
  const OgoObserver& observer_;
  CutPool pool_;
  double step_min_;
  Clock::time_point t0_;
  Neighborhood hood_;
  std::unordered_set<ActivationPattern, ActivationPatternHash> certified_;
  OgoResult result_;
};

}  // namespace

OgoResult run_ogo(const Network& net, const LossSpec& loss, const FeasibleSet& domain,
                  const Vector& x0, const OgoConfig& config, const OgoObserver& observer) {
  domain.validate();
  if (static_cast<std::size_t>(x0.size()) != domain.dim() || domain.dim() != net.input_dim()) {
    throw InvalidInput("OGO: start point, feasible set and network dimensions differ");
  }
  config.validate(domain.dim());
  return OgoRun(net, loss, domain, config, observer).run(x0);
}

}  // namespace reluinv
