#include "reluinv/run_log.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "reluinv/errors.hpp"

namespace reluinv {

const char* to_string(Phase phase) noexcept {
  return phase == Phase::Primal ? "primal" : "dual";
}

const char* to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::EpsLocalOptimal:
      return "eps_local_optimal";
    case RunStatus::IterationLimit:
      return "iteration_limit";
    case RunStatus::PatternCapExceeded:
      return "pattern_cap_exceeded";
    case RunStatus::TimeLimit:
      return "time_limit";
    case RunStatus::Stalled:
      return "stalled";
    case RunStatus::FixedPoint:
      return "fixed_point";
  }
  return "unknown";
}

void write_iteration_csv(std::ostream& out, std::span<const IterationLog> log) {
  out << "iter,time_s,phase,g_curr,g_best,step,cuts,status\n";
  out << std::setprecision(17);
  for (const IterationLog& e : log) {
    out << e.iter << ',' << e.time_s << ',' << to_string(e.phase) << ',' << e.g_curr << ','
        << e.g_best << ',' << e.step << ',' << e.cuts << ',' << e.status << '\n';
  }
}

void write_iteration_csv(const std::string& path, std::span<const IterationLog> log) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_iteration_csv(out, log);
}

}  // namespace reluinv
