#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "reluinv/network.hpp"

namespace reluinv {

// Model file layout:
//   {"input_dim": n,
//    "layers": [{"weights": [[...], ...], "bias": [...], "activation": "relu"|"linear"}]}
// Row i of "weights" holds the incoming weights of neuron i of that layer.
Network parse_network(std::string_view json_text);
std::string dump_network(const Network& net);

Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);

}  // namespace reluinv
