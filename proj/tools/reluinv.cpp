// reluinv: command line front end for the inverse-problem toolkit.
//
//   reluinv run --model M --instance I --algo ogo|pgd [--config C] [--log OUT.csv]
//   reluinv suite --spec SUITE.json --out DIR [--jobs J]
//   reluinv gen --arch 2,32,32,4 --seed S [--normalize] --out M.json
//   reluinv export-milp --model M --instance I --out P.lp
//   reluinv oracle --model M --instance I --mode grid|fw-regions
//
// Exit codes: 0 success, 1 other error, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "reluinv/bench.hpp"
#include "reluinv/errors.hpp"
#include "reluinv/instance_io.hpp"
#include "reluinv/instance_lab.hpp"
#include "reluinv/milp_export.hpp"
#include "reluinv/model_io.hpp"
#include "reluinv/network.hpp"
#include "reluinv/ogo.hpp"
#include "reluinv/oracles.hpp"
#include "reluinv/pgd.hpp"
#include "reluinv/run_log.hpp"

namespace fs = std::filesystem;
using namespace reluinv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_vector(const Vector& v) {
  std::ostringstream ss;
  ss.precision(10);
  ss << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) ss << (i ? ", " : "") << v[i];
  ss << ']';
  return ss.str();
}

// Model from --model when given, else from the instance's "model" field.
Network load_model(const std::string& model_arg, const Instance& inst, const fs::path& inst_path) {
  if (!model_arg.empty()) return load_network(model_arg);
  if (inst.model.empty()) throw InvalidInput("no --model given and the instance names no model");
  return load_network(model_path(inst, inst_path));
}

std::vector<Vector> starts_or_center(const Instance& inst) {
  if (!inst.starts.empty()) return inst.starts;
  return {inst.domain.clamp(0.5 * (inst.domain.lower + inst.domain.upper))};
}

struct RunArgs {
  std::string model;
  std::string instance;
  std::string algo = "ogo";
  std::string config;
  std::string log;
  std::size_t start = 0;
  bool all_starts = false;
};

fs::path indexed_log_path(const fs::path& log, std::size_t k, bool indexed) {
  if (!indexed) return log;
  fs::path out = log;
  out.replace_filename(log.stem().string() + "_" + std::to_string(k) + log.extension().string());
  return out;
}

int cmd_run(const RunArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Network net = load_model(a.model, inst, a.instance);
  inst.validate(net);
  const std::vector<Vector> starts = starts_or_center(inst);
  if (a.start >= starts.size()) {
    throw InvalidInput("start index " + std::to_string(a.start) + " out of range (" +
                       std::to_string(starts.size()) + " starts)");
  }
  const std::string cfg_text = a.config.empty() ? std::string("{}") : read_file(a.config);

  std::vector<std::size_t> picks;
  if (a.all_starts) {
    for (std::size_t k = 0; k < starts.size(); ++k) picks.push_back(k);
  } else {
    picks.push_back(a.start);
  }

  for (std::size_t k : picks) {
    RunResult res;
    if (a.algo == "ogo") {
      const OgoConfig cfg = parse_ogo_config(cfg_text);
      res = run_ogo(net, inst.loss(), inst.domain, starts[k], cfg);
    } else {
      const PgdConfig cfg = parse_pgd_config(cfg_text);
      res = run_pgd(net, inst.loss(), inst.domain, starts[k], cfg);
    }
    std::printf("start %zu: status=%s iterations=%zu g0=%.10g g=%.10g time=%.4fs\n", k,
                to_string(res.status), res.iterations, res.initial_value, res.value, res.time_s);
    std::printf("  x = %s\n", format_vector(res.x).c_str());
    for (const std::string& w : res.warnings) std::printf("  warning: %s\n", w.c_str());
    if (!a.log.empty()) {
      write_iteration_csv(indexed_log_path(a.log, k, picks.size() > 1).string(), res.log);
    }
  }
  return kExitOk;
}

int cmd_suite(const std::string& spec_path, const std::string& out_dir, std::size_t jobs) {
  const SuiteSpec spec = load_suite(spec_path);
  const SuiteResult res = run_suite(spec, out_dir, jobs);
  std::size_t failed = 0;
  for (const BenchRecord& r : res.records) failed += r.failed ? 1 : 0;
  std::printf("%zu runs, %zu failed, output in %s\n", res.records.size(), failed,
              out_dir.c_str());
  for (const std::string& d : res.degenerate) {
    std::printf("degenerate instance (v0 <= v*): %s\n", d.c_str());
  }
  return kExitOk;
}

struct GenArgs {
  std::string arch;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::size_t samples = 1000;
  std::string out;
  std::string instance_out;
  std::size_t starts = 1;
};

int cmd_gen(const GenArgs& a) {
  const std::vector<std::size_t> arch = parse_arch(a.arch);
  Network net = generate_network(arch, a.seed);
  if (a.normalize) net = normalize_outputs(net, a.samples, a.seed).network;
  save_network(net, a.out);
  std::printf("wrote %s (%zu ReLU neurons)\n", a.out.c_str(), net.relu_count());
  if (!a.instance_out.empty()) {
    const RandomInstance ri = random_instance(net, a.starts, a.seed);
    Instance inst;
    const fs::path inst_dir = fs::absolute(a.instance_out).parent_path();
    inst.model = fs::relative(fs::absolute(a.out), inst_dir).string();
    inst.target = ri.target;
    inst.domain = ri.domain;
    inst.starts = ri.starts;
    inst.seed = a.seed;
    save_instance(inst, a.instance_out);
    std::printf("wrote %s (%zu starts)\n", a.instance_out.c_str(), inst.starts.size());
  }
  return kExitOk;
}

int cmd_export(const std::string& model, const std::string& instance, const std::string& out) {
  const Instance inst = load_instance(instance);
  const Network net = load_model(model, inst, instance);
  inst.validate(net);
  export_milp(net, inst.target, inst.domain, out);
  std::printf("wrote %s (%zu binaries)\n", out.c_str(), net.relu_count());
  return kExitOk;
}

struct OracleArgs {
  std::string model;
  std::string instance;
  std::string mode = "grid";
  double resolution = 1e-3;
  std::size_t fw_iterations = 500;
  std::size_t samples = 64;
};

int cmd_oracle(const OracleArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Network net = load_model(a.model, inst, a.instance);
  inst.validate(net);
  if (a.mode == "grid") {
    const GridOracleResult g = oracle_grid(net, inst.loss(), inst.domain, a.resolution);
    std::printf("grid: %zu points, best g=%.10g at x=%s\n", g.evaluated, g.g_best,
                format_vector(g.x_best).c_str());
    for (const GridPoint& p : g.local_minima) {
      std::printf("  local minimum g=%.10g at x=%s\n", p.value, format_vector(p.x).c_str());
    }
    return kExitOk;
  }

  // Regions of the starts plus seeded samples in the box.
  std::vector<Vector> points = starts_or_center(inst);
  std::mt19937_64 rng(inst.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < a.samples; ++s) {
    Vector x(static_cast<Eigen::Index>(inst.domain.dim()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = inst.domain.lower[i] + (inst.domain.upper[i] - inst.domain.lower[i]) * unit(rng);
    }
    if (inst.domain.contains(x)) points.push_back(x);
  }
  std::unordered_set<ActivationPattern, ActivationPatternHash> seen;
  double best = std::numeric_limits<double>::infinity();
  Vector best_x;
  for (const Vector& x : points) {
    const ActivationPattern pat = pattern_of(net, x, 0.0).pattern;
    if (!seen.insert(pat).second) continue;
    try {
      const RegionOracleResult r =
          oracle_region_fw(net, inst.loss(), inst.domain, pat, a.fw_iterations);
      std::printf("region %s: g=%.10g lower=%.10g gap=%.3g iterations=%zu\n",
                  pat.to_string().c_str(), r.g_best, r.lower_bound, r.gap, r.iterations);
      if (r.g_best < best) {
        best = r.g_best;
        best_x = r.x_best;
      }
    } catch (const InvalidInput& e) {
      std::printf("region %s: skipped (%s)\n", pat.to_string().c_str(), e.what());
    }
  }
  if (best_x.size() > 0) {
    std::printf("best over %zu regions: g=%.10g at x=%s\n", seen.size(), best,
                format_vector(best_x).c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ReLU network inverse problems: OGO, PGD, oracles and MILP export"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "optimize one instance");
  run_cmd->add_option("--model", run.model, "model JSON (default: the instance's model)");
  run_cmd->add_option("--instance", run.instance, "instance JSON")->required();
  run_cmd->add_option("--algo", run.algo, "ogo or pgd")
      ->check(CLI::IsMember({"ogo", "pgd"}));
  run_cmd->add_option("--config", run.config, "algorithm config JSON");
  run_cmd->add_option("--log", run.log, "iteration log CSV");
  run_cmd->add_option("--start", run.start, "start index in the instance");
  run_cmd->add_flag("--all-starts", run.all_starts, "run every start; logs get a _k suffix");

  std::string suite_spec;
  std::string suite_out;
  std::size_t suite_jobs = 1;
  auto* suite_cmd = app.add_subcommand("suite", "run a benchmark suite");
  suite_cmd->add_option("--spec", suite_spec, "suite JSON")->required();
  suite_cmd->add_option("--out", suite_out, "output directory")->required();
  suite_cmd->add_option("--jobs", suite_jobs, "worker threads")->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a random network");
  gen_cmd->add_option("--arch", gen.arch, "layer widths, e.g. 2,32,32,4")->required();
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_flag("--normalize", gen.normalize, "scale outputs onto [0,1] over [0,1]^n");
  gen_cmd->add_option("--samples", gen.samples, "samples for --normalize")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen.out, "model JSON")->required();
  gen_cmd->add_option("--instance-out", gen.instance_out, "also write a random instance");
  gen_cmd->add_option("--starts", gen.starts, "starts in the random instance");

  std::string ex_model;
  std::string ex_instance;
  std::string ex_out;
  auto* ex_cmd = app.add_subcommand("export-milp", "write the big-M MILP in LP format");
  ex_cmd->add_option("--model", ex_model, "model JSON (default: the instance's model)");
  ex_cmd->add_option("--instance", ex_instance, "instance JSON")->required();
  ex_cmd->add_option("--out", ex_out, "LP file")->required();

  OracleArgs orc;
  auto* orc_cmd = app.add_subcommand("oracle", "exhaustive reference solutions");
  orc_cmd->add_option("--model", orc.model, "model JSON (default: the instance's model)");
  orc_cmd->add_option("--instance", orc.instance, "instance JSON")->required();
  orc_cmd->add_option("--mode", orc.mode, "grid or fw-regions")
      ->check(CLI::IsMember({"grid", "fw-regions"}));
  orc_cmd->add_option("--resolution", orc.resolution, "grid spacing")
      ->check(CLI::PositiveNumber);
  orc_cmd->add_option("--iterations", orc.fw_iterations, "Frank-Wolfe iterations per region");
  orc_cmd->add_option("--samples", orc.samples, "box samples used to find regions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*suite_cmd) return cmd_suite(suite_spec, suite_out, suite_jobs);
    if (*gen_cmd) return cmd_gen(gen);
    if (*ex_cmd) return cmd_export(ex_model, ex_instance, ex_out);
    if (*orc_cmd) return cmd_oracle(orc);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
