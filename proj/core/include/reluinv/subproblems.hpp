#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/lp.hpp"
#include "reluinv/network.hpp"
#include "reluinv/region.hpp"

namespace reluinv {

// One evaluated observation x^k with its linearization data.
struct CutRecord {
  std::size_t index = 0;
  Vector point;
  double value = 0.0;
  Vector gradient;
  ActivationPattern pattern;
  BoundarySet boundary;

  // g(x^k) + grad^T (x - x^k)
  double linearization(const Vector& x) const { return value + gradient.dot(x - point); }
};

/// Append-only store of observations; tracks the incumbent argmin.
class CutPool {
 public:
  explicit CutPool(double tau = kDefaultBoundaryTolerance) : tau_(tau) {}

  const CutRecord& add(const Network& net, const LossSpec& loss, const Vector& x);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const CutRecord& operator[](std::size_t k) const { return records_.at(k); }
  std::span<const CutRecord> records() const noexcept { return records_; }
  const CutRecord& latest() const { return records_.back(); }

  // Earliest record attaining the minimum value.
  std::size_t incumbent_index() const { return incumbent_; }
  const CutRecord& incumbent() const { return records_.at(incumbent_); }
  double tau() const noexcept { return tau_; }

 private:
  double tau_;
  std::vector<CutRecord> records_;
  std::size_t incumbent_ = 0;
};

// Solution of one outer-approximation LP over (x, v).
struct OaSolution {
  Vector x;
  double v = 0.0;
  std::vector<std::size_t> cuts;  // pool indices used as objective rows
  std::size_t rows = 0;           // total LP rows (cuts, feasibility cuts, region, X)
};

/// K(x*): pool indices whose point lies (within tau) in the region of some
/// neighbor pattern of the incumbent.
std::vector<std::size_t> select_k_of_incumbent(const CutPool& pool,
                                               std::span<const RegionSystem> neighbor_regions,
                                               double tau);
std::vector<std::size_t> select_k_of_incumbent(const CutPool& pool, const Network& net,
                                               const FeasibleSet& domain,
                                               std::size_t pattern_cap = kDefaultPatternCap);

/// K* u {latest}: cuts within Euclidean distance gamma_c of the incumbent whose
/// linearization at the incumbent lies strictly below the incumbent value,
/// plus the latest cut unconditionally. Ascending order.
std::vector<std::size_t> select_k_star(const CutPool& pool, double gamma_c, std::size_t latest);

// min v  s.t.  v >= linearization_k(x) for k in `cuts`, x in X.
// Throws InvalidInput when X is empty.
OaSolution solve_cut_lp(const CutPool& pool, std::span<const std::size_t> cuts,
                        const FeasibleSet& domain);

OaSolution build_and_solve_noa(const CutPool& pool, std::span<const std::size_t> k_of_incumbent,
                               const FeasibleSet& domain);
OaSolution build_and_solve_noa(const CutPool& pool, const Network& net, const FeasibleSet& domain,
                               std::size_t pattern_cap = kDefaultPatternCap);

OaSolution build_and_solve_dloa(const CutPool& pool, const FeasibleSet& domain, double gamma_c,
                                std::size_t latest);

/// Region-localized outer approximation. Objective cuts come from
/// observations inside the region (value and gradient of the region's affine
/// extension); observations outside contribute discrepancy-node feasibility
/// cuts; the region rows and X are always present. nullopt when the LP is
/// infeasible.
std::optional<OaSolution> build_and_solve_rloa(const CutPool& pool, const FeasibleSet& domain,
                                               const RegionSystem& region, const Network& net,
                                               const LossSpec& loss, double tau);

struct OcResult {
  double value = 0.0;  // min over X n Y(N) of grad_N g(x*)^T (x - x*); <= 0
  Vector x;            // minimizer
};

inline constexpr double kDefaultOcTolerance = 1e-8;

// nullopt when X n Y(N) is empty.
std::optional<OcResult> build_and_solve_oc(const Network& net, const LossSpec& loss,
                                           const Vector& x_star, const RegionSystem& region,
                                           const FeasibleSet& domain);

// argmin over X n Y(N) of the max-norm distance to x (an LP); nullopt when
// the intersection is empty. Returns x itself when it already lies in both.
std::optional<Vector> nearest_region_point(const Vector& x, const RegionSystem& region,
                                           const FeasibleSet& domain);

}  // namespace reluinv
