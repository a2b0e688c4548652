#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/network.hpp"

namespace reluinv {

// Layer widths from input to output, e.g. {2, 32, 32, 4}. Weights and biases
// are i.i.d. standard normal scaled by 1/sqrt(fan-in); hidden layers are ReLU,
// the last layer is linear. Deterministic per seed.
Network generate_network(std::span<const std::size_t> arch, std::uint64_t seed);

// Parses "256,128,64" into widths. Throws InvalidInput on malformed text.
std::vector<std::size_t> parse_arch(std::string_view text);

struct OutputScaling {
  Vector scale;   // y' = scale .* y + offset
  Vector offset;
};

struct NormalizedNetwork {
  Network network;
  OutputScaling scaling;
};

/// Maps every output channel affinely onto [0, 1] over `samples` uniform
/// inputs in [0, 1]^n. The map is folded into the final linear layer, so the
/// ReLU layers and their regions are unchanged. A channel whose sampled range
/// is below 1e-12 becomes the constant 0.5.
NormalizedNetwork normalize_outputs(const Network& net, std::size_t samples, std::uint64_t seed);

// f(x) = ReLU(x-1) - 2 ReLU(x-2) + 2 ReLU(x-3) - ReLU(x-4)
Network toy_network_1d();
// [0, 5]
FeasibleSet toy_domain_1d();

struct RandomInstance {
  Vector target;              // uniform in [0, 1]^m
  FeasibleSet domain;         // [0, 1]^n
  std::vector<Vector> starts; // uniform in the box
};

RandomInstance random_instance(const Network& net, std::size_t start_count, std::uint64_t seed);

}  // namespace reluinv
