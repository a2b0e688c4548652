#pragma once

// Reference implementations used only by tests. They share no code with the
// library beyond the Network container and plain data types.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "reluinv/lp.hpp"
#include "reluinv/network.hpp"

namespace reluinv::oracle {

// Pre-activation of every ReLU neuron, in ReLU index order, computed with
// scalar loops. When `mask` is given, ReLU neuron j passes its input iff
// mask[j], regardless of sign.
std::vector<double> relu_preactivations(const Network& net, const Vector& x,
                                        const std::vector<bool>* mask = nullptr);

// Network output with scalar loops, optionally masked as above.
Vector output(const Network& net, const Vector& x, const std::vector<bool>* mask = nullptr);

double mse(const Vector& y, const Vector& target);
double loss(const Network& net, const Vector& target, const Vector& x,
            const std::vector<bool>* mask = nullptr);

// Sign vector {a_j > 0}.
std::vector<bool> sign_pattern(const Network& net, const Vector& x);

// Central differences.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double h);

// 1-D toy network in closed form.
double toy_f(double x);

struct VertexLpResult {
  bool feasible = false;
  double objective = 0.0;
  Vector point;
};

// Minimizes over all basic solutions: every choice of d tight planes among
// rows and finite bounds. Requires every variable to have finite bounds.
VertexLpResult vertex_enumeration(const LinearProgram& lp, double tol = 1e-9);

Vector uniform_box(std::mt19937_64& rng, const Vector& lo, const Vector& hi);

// Random nets with fixed architecture and a seed; a private generator so the
// tests do not depend on the library's instance generator.
Network random_network(const std::vector<std::size_t>& arch, std::mt19937_64& rng,
                       double bias_scale = 1.0);

// Points whose sign pattern equals that of `seed` (checked with
// sign_pattern), found by shrinking random steps around the seed inside the
// box. Returns fewer than `count` points only when the walk keeps failing.
std::vector<Vector> region_members(const Network& net, const Vector& seed, const Vector& lo,
                                   const Vector& hi, std::size_t count, std::mt19937_64& rng);

}  // namespace reluinv::oracle
