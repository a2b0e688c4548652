#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reluinv/ogo.hpp"
#include "reluinv/pgd.hpp"
#include "reluinv/run_log.hpp"

namespace reluinv {

// (v0 - vk) / (v0 - vstar). Throws InvalidInput unless v0 > vstar.
double percent_gap_closed(double v0, double vk, double vstar);

enum class Algorithm { Ogo, Pgd };

struct Approach {
  std::string name;
  Algorithm algo = Algorithm::Ogo;
  OgoConfig ogo;
  PgdConfig pgd;
};

/// Suite file layout:
///   {"instances": ["inst.json", ...],
///    "approaches": [{"name": "OGO", "algo": "ogo"|"pgd", "config": {...}}, ...],
///    "include_oracle": false, "oracle_resolution": 1e-3, "profile_points": 200}
/// Relative paths are resolved against the suite file's directory.
struct SuiteSpec {
  std::vector<std::filesystem::path> instances;
  std::vector<Approach> approaches;
  bool include_oracle = false;   // grid oracle on instances with at most 2 inputs
  double oracle_resolution = 1e-3;
  std::size_t profile_points = 200;
};

SuiteSpec parse_suite(std::string_view json_text, const std::filesystem::path& base_dir);
SuiteSpec load_suite(const std::filesystem::path& path);

// One (instance file, start point, approach) run.
struct BenchRecord {
  std::string instance;   // "<instance stem>#<start index>"
  std::size_t start = 0;
  std::string approach;
  std::string status;     // run status, or "error: <message>"
  std::size_t iterations = 0;
  double v0 = 0.0;
  double vk = 0.0;
  double vstar = 0.0;
  std::optional<double> pgc;  // unset when v0 <= vstar
  double abs_diff = 0.0;      // vk - vstar
  double time_s = 0.0;
  std::string log_path;
  std::vector<IterationLog> log;
  bool failed = false;
};

struct SuiteResult {
  std::vector<BenchRecord> records;          // instance-major, then approach
  std::vector<std::string> degenerate;       // instances with v0 <= v* for some run
};

/// Runs every (instance, start, approach) triple on a pool of `jobs` worker
/// threads and sets v* per instance to the lowest final value, including the
/// grid oracle when enabled. A failing run is recorded, never fatal. When
/// `out_dir` is nonempty, per-run iteration logs go to out_dir/logs and
/// summary.csv, runs.csv and profile.csv to out_dir.
SuiteResult run_suite(const SuiteSpec& spec, const std::filesystem::path& out_dir,
                      std::size_t jobs);

// instance,start,approach,status,iterations,v0,vk,vstar,abs_diff,pgc
// Free of wall-clock values, so equal seeds give identical bytes.
void write_summary_csv(std::ostream& out, std::span<const BenchRecord> records);
// instance,start,approach,status,iterations,time_s,log
void write_runs_csv(std::ostream& out, std::span<const BenchRecord> records);

struct ProfilePoint {
  std::string approach;
  double time_s = 0.0;
  double avg_abs_diff = 0.0;
  double avg_pgc = 0.0;      // over runs with a defined metric
  std::size_t runs = 0;
};

// Best-so-far value of one run at wall time t (the start value before the
// first log entry).
double best_at(const BenchRecord& rec, double t);

/// Averages of the best-so-far metrics per approach at each time in `times`.
std::vector<ProfilePoint> progress_profile(std::span<const BenchRecord> records,
                                           std::span<const double> times);
// `points` log-spaced times from 1e-4 s to the longest run.
std::vector<double> profile_times(std::span<const BenchRecord> records, std::size_t points);
// approach,time_s,avg_abs_diff,avg_pgc,runs
void write_profile_csv(std::ostream& out, std::span<const ProfilePoint> profile);

}  // namespace reluinv
