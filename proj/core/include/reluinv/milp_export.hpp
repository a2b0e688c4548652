#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/network.hpp"

namespace reluinv {

// Pre-activation range of every ReLU neuron over the box of X.
struct PreactivationBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

PreactivationBounds preactivation_bounds(const Network& net, const FeasibleSet& domain);

// M_j = max(|lower_j|, |upper_j|) from interval arithmetic, one per ReLU neuron.
std::vector<double> compute_bigM(const Network& net, const FeasibleSet& domain);

/// Mixed-integer encoding in CPLEX LP text. Variables: x{i} inputs with the
/// box as bounds, t{j} >= 0 and s{j} >= 0 the positive and negative parts of
/// ReLU neuron j, z{j} binary, a{l}_{i} neurons of intermediate linear layers,
/// y{o} outputs. Rows, one per line:
///   n{j}:  t{j} - s{j} - sum w x_prev = b
///   ut{j}: t{j} - M_j z{j} <= 0
///   us{j}: s{j} + M_j z{j} <= M_j
///   o{o}:  y{o} - sum w x_prev = b
///   c{k}:  the linear rows of X
/// The objective is left empty; a comment block records the target.
std::string export_milp(const Network& net, const Vector& target, const FeasibleSet& domain);
void export_milp(const Network& net, const Vector& target, const FeasibleSet& domain,
                 const std::filesystem::path& path);

// The same model with every z{j} fixed by `pattern`: an LP whose feasible
// x-projection is X n Y(pattern). Active neurons get s{j} = 0, inactive
// neurons t{j} = 0; no binaries remain.
std::string export_fixed_pattern(const Network& net, const Vector& target,
                                 const FeasibleSet& domain, const ActivationPattern& pattern);

}  // namespace reluinv
