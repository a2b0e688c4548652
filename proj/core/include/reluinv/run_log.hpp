#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "reluinv/network.hpp"

namespace reluinv {

enum class Phase { Primal, Dual };

enum class RunStatus {
  EpsLocalOptimal,
  IterationLimit,
  PatternCapExceeded,
  TimeLimit,
  Stalled,     // PGD: no improvement for `stall_limit` steps
  FixedPoint,  // PGD: x^{k+1} == x^k
};

const char* to_string(Phase phase) noexcept;
const char* to_string(RunStatus status) noexcept;

struct IterationLog {
  std::size_t iter = 0;
  double time_s = 0.0;
  Phase phase = Phase::Primal;
  double g_curr = 0.0;
  double g_best = 0.0;
  double step = 0.0;
  std::size_t cuts = 0;
  std::string status;
};

struct RunResult {
  Vector x;
  double value = 0.0;
  double initial_value = 0.0;
  RunStatus status = RunStatus::IterationLimit;
  std::size_t iterations = 0;
  double time_s = 0.0;
  std::vector<IterationLog> log;
  std::vector<std::string> warnings;
};

// Columns: iter,time_s,phase,g_curr,g_best,step,cuts,status
void write_iteration_csv(std::ostream& out, std::span<const IterationLog> log);
void write_iteration_csv(const std::string& path, std::span<const IterationLog> log);

}  // namespace reluinv
