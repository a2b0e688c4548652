#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reluinv/feasible_set.hpp"
#include "reluinv/network.hpp"
#include "reluinv/ogo.hpp"
#include "reluinv/pgd.hpp"

namespace reluinv {

// Instance file layout:
//   {"model": "path/to/model.json", "target": [...], "box_lo": [...], "box_hi": [...],
//    "linear_constraints": [{"coeffs": [...], "rhs": r, "sense": "eq"|"le"|"ge"}],
//    "starts": [[...], ...], "seed": s}
// "linear_constraints", "starts" and "seed" are optional. A relative model
// path is resolved against the directory of the instance file.
struct Instance {
  std::string model;
  Vector target;
  FeasibleSet domain;
  std::vector<Vector> starts;
  std::uint64_t seed = 0;

  LossSpec loss() const { return {target, LossKind::MeanSquaredError}; }
  // Throws InvalidInput when sizes disagree with the network or a start is
  // not finite.
  void validate(const Network& net) const;
};

Instance parse_instance(std::string_view json_text);
std::string dump_instance(const Instance& inst);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);
// Resolved model path for an instance loaded from `instance_path`.
std::filesystem::path model_path(const Instance& inst, const std::filesystem::path& instance_path);

// Config objects use the field names of OgoConfig / PgdConfig; omitted fields
// keep their defaults and unknown fields are rejected.
OgoConfig parse_ogo_config(std::string_view json_text);
PgdConfig parse_pgd_config(std::string_view json_text);
std::string dump_ogo_config(const OgoConfig& cfg);
std::string dump_pgd_config(const PgdConfig& cfg);

}  // namespace reluinv
