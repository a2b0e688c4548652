#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reluinv/lp.hpp"

namespace reluinv {

/// Reader for the CPLEX LP subset written by the exporters: sections
/// Minimize/Maximize, Subject To, Bounds, Binaries, End; one constraint or
/// bound per line; comments start with a backslash. Variables default to
/// [0, +inf); binaries are bounded to [0, 1].
struct LpFileModel {
  std::vector<std::string> variables;  // order of first appearance
  std::unordered_map<std::string, std::size_t> index;
  bool maximize = false;
  Vector objective;
  std::vector<std::string> row_names;
  std::vector<LinearConstraint> rows;
  Vector lower;
  Vector upper;
  std::vector<std::size_t> binaries;
  std::vector<std::string> comments;

  // Throws InvalidInput for an unknown name.
  std::size_t var(const std::string& name) const;
  bool has_var(const std::string& name) const { return index.contains(name); }
  LinearProgram program() const;
};

LpFileModel parse_lp_file(std::string_view text);

}  // namespace reluinv
