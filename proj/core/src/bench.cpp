#include "reluinv/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "reluinv/errors.hpp"
#include "reluinv/instance_io.hpp"
#include "reluinv/model_io.hpp"
#include "reluinv/oracles.hpp"
#include "json_util.hpp"

namespace reluinv {

using nlohmann::json;

double percent_gap_closed(double v0, double vk, double vstar) {
  if (!(v0 > vstar)) {
    throw InvalidInput("percent gap closed is undefined when v0 <= v*");
  }
  return (v0 - vk) / (v0 - vstar);
}

SuiteSpec parse_suite(std::string_view json_text, const std::filesystem::path& base_dir) {
  const std::string where = "suite";
  const json j = detail::parse_json(json_text, where);
  if (!j.is_object()) throw InvalidInput("suite: expected a JSON object");
  for (const auto& item : j.items()) {
    static const std::vector<std::string> allowed = {
        "instances", "approaches", "include_oracle", "oracle_resolution", "profile_points"};
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw InvalidInput("suite: unknown field \"" + item.key() + "\"");
    }
  }
  SuiteSpec spec;
  const json& instances = detail::get_field(j, "instances", where);
  if (!instances.is_array() || instances.empty()) {
    throw InvalidInput("suite: \"instances\" must be a nonempty array of paths");
  }
  for (const json& p : instances) {
    if (!p.is_string()) throw InvalidInput("suite: instance entries must be path strings");
    const std::filesystem::path path(p.get<std::string>());
    spec.instances.push_back(path.is_absolute() ? path : base_dir / path);
  }
  const json& approaches = detail::get_field(j, "approaches", where);
  if (!approaches.is_array() || approaches.empty()) {
    throw InvalidInput("suite: \"approaches\" must be a nonempty array");
  }
  std::vector<std::string> names;
  for (const json& a : approaches) {
    Approach ap;
    const json& name = detail::get_field(a, "name", "suite approach");
    const json& algo = detail::get_field(a, "algo", "suite approach");
    if (!name.is_string() || !algo.is_string()) {
      throw InvalidInput("suite approach: \"name\" and \"algo\" must be strings");
    }
    ap.name = name.get<std::string>();
    if (ap.name.empty() || std::find(names.begin(), names.end(), ap.name) != names.end()) {
      throw InvalidInput("suite approach names must be nonempty and unique");
    }
    names.push_back(ap.name);
    const std::string config = a.contains("config") ? a["config"].dump() : "{}";
    if (algo.get<std::string>() == "ogo") {
      ap.algo = Algorithm::Ogo;
      ap.ogo = parse_ogo_config(config);
    } else if (algo.get<std::string>() == "pgd") {
      ap.algo = Algorithm::Pgd;
      ap.pgd = parse_pgd_config(config);
    } else {
      throw InvalidInput("suite approach: algo must be ogo or pgd");
    }
    spec.approaches.push_back(std::move(ap));
  }
  if (j.contains("include_oracle")) {
    if (!j["include_oracle"].is_boolean()) throw InvalidInput("suite: include_oracle must be bool");
    spec.include_oracle = j["include_oracle"].get<bool>();
  }
  if (j.contains("oracle_resolution")) {
    spec.oracle_resolution = detail::get_double(j, "oracle_resolution", where);
    if (!(spec.oracle_resolution > 0.0)) throw InvalidInput("suite: oracle_resolution must be > 0");
  }
  if (j.contains("profile_points")) {
    spec.profile_points = detail::get_size(j, "profile_points", where);
    if (spec.profile_points < 2) throw InvalidInput("suite: profile_points must be at least 2");
  }
  return spec;
}

SuiteSpec load_suite(const std::filesystem::path& path) {
  return parse_suite(detail::read_text_file(path), path.parent_path());
}

namespace {

struct LoadedInstance {
  std::string stem;
  std::shared_ptr<const Network> net;
  Instance inst;
  std::string error;
};

struct Task {
  std::size_t file = 0;
  std::size_t start = 0;
  std::size_t approach = 0;
  bool oracle = false;
};

std::string safe_name(std::string s) {
  for (char& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

void run_parallel(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (std::thread& t : workers) t.join();
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SuiteResult run_suite(const SuiteSpec& spec, const std::filesystem::path& out_dir,
                      std::size_t jobs) {
  if (spec.approaches.empty()) throw InvalidInput("suite has no approaches");
  std::vector<LoadedInstance> files;
  std::map<std::filesystem::path, std::shared_ptr<const Network>> models;
  for (const std::filesystem::path& path : spec.instances) {
    LoadedInstance li;
    li.stem = path.stem().string();
    try {
      li.inst = load_instance(path);
      const std::filesystem::path mp = model_path(li.inst, path);
      auto it = models.find(mp);
      if (it == models.end()) {
        it = models.emplace(mp, std::make_shared<const Network>(load_network(mp))).first;
      }
      li.net = it->second;
      li.inst.validate(*li.net);
      if (li.inst.starts.empty()) throw InvalidInput("instance has no start points");
    } catch (const Error& e) {
      li.error = e.what();
    }
    files.push_back(std::move(li));
  }

  std::vector<Task> tasks;
  for (std::size_t f = 0; f < files.size(); ++f) {
    if (!files[f].error.empty()) continue;
    for (std::size_t s = 0; s < files[f].inst.starts.size(); ++s) {
      for (std::size_t a = 0; a < spec.approaches.size(); ++a) tasks.push_back({f, s, a, false});
    }
    if (spec.include_oracle && files[f].net->input_dim() <= 2) tasks.push_back({f, 0, 0, true});
  }

  const bool write_files = !out_dir.empty();
  if (write_files) std::filesystem::create_directories(out_dir / "logs");

  std::vector<BenchRecord> slots(tasks.size());
  std::vector<double> oracle_value(files.size(), std::numeric_limits<double>::infinity());
  run_parallel(tasks.size(), jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    const LoadedInstance& li = files[t.file];
    const LossSpec loss = li.inst.loss();
    if (t.oracle) {
      try {
        oracle_value[t.file] =
            oracle_grid(*li.net, loss, li.inst.domain, spec.oracle_resolution).g_best;
      } catch (const Error&) {
        // an oracle is optional; v* then comes from the runs alone
      }
      return;
    }
    const Approach& ap = spec.approaches[t.approach];
    BenchRecord rec;
    rec.instance = li.stem + "#" + std::to_string(t.start);
    rec.start = t.start;
    rec.approach = ap.name;
    const Vector& x0 = li.inst.starts[t.start];
    try {
      RunResult r = ap.algo == Algorithm::Ogo
                        ? static_cast<RunResult>(run_ogo(*li.net, loss, li.inst.domain, x0, ap.ogo))
                        : run_pgd(*li.net, loss, li.inst.domain, x0, ap.pgd);
      rec.status = to_string(r.status);
      rec.iterations = r.iterations;
      rec.v0 = r.initial_value;
      rec.vk = r.value;
      rec.time_s = r.time_s;
      rec.log = std::move(r.log);
    } catch (const Error& e) {
      rec.failed = true;
      rec.status = std::string("error: ") + e.what();
      rec.v0 = rec.vk = std::numeric_limits<double>::quiet_NaN();
    }
    if (write_files && !rec.log.empty()) {
      const std::string name = safe_name(li.stem) + "_s" + std::to_string(t.start) + "_" +
                               safe_name(ap.name) + ".csv";
      rec.log_path = (std::filesystem::path("logs") / name).string();
      write_iteration_csv((out_dir / rec.log_path).string(), rec.log);
    }
    slots[i] = std::move(rec);
  });

  SuiteResult result;
  for (std::size_t f = 0; f < files.size(); ++f) {
    if (files[f].error.empty()) continue;
    BenchRecord rec;
    rec.instance = files[f].stem;
    rec.approach = "-";
    rec.failed = true;
    rec.status = "error: " + files[f].error;
    rec.v0 = rec.vk = rec.vstar = rec.abs_diff = std::numeric_limits<double>::quiet_NaN();
    result.records.push_back(std::move(rec));
  }

  // best known value per instance file: all starts, all approaches, oracle
  std::vector<double> vstar = oracle_value;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].oracle || slots[i].failed) continue;
    vstar[tasks[i].file] = std::min(vstar[tasks[i].file], slots[i].vk);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].oracle) continue;
    BenchRecord& rec = slots[i];
    rec.vstar = vstar[tasks[i].file];
    if (rec.failed) {
      rec.abs_diff = std::numeric_limits<double>::quiet_NaN();
    } else {
      rec.abs_diff = rec.vk - rec.vstar;
      if (rec.v0 > rec.vstar) {
        rec.pgc = percent_gap_closed(rec.v0, rec.vk, rec.vstar);
      } else {
        result.degenerate.push_back(rec.instance + " " + rec.approach);
      }
    }
    result.records.push_back(std::move(rec));
  }

  if (write_files) {
    std::ofstream summary(out_dir / "summary.csv");
    write_summary_csv(summary, result.records);
    std::ofstream runs(out_dir / "runs.csv");
    write_runs_csv(runs, result.records);
    const auto times = profile_times(result.records, spec.profile_points);
    std::ofstream profile(out_dir / "profile.csv");
    write_profile_csv(profile, progress_profile(result.records, times));
    if (!summary || !runs || !profile) throw InvalidInput("cannot write suite outputs");
  }
  return result;
}

void write_summary_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "instance,start,approach,status,iterations,v0,vk,vstar,abs_diff,pgc\n";
  for (const BenchRecord& r : records) {
    out << r.instance << ',' << r.start << ',' << r.approach << ",\"" << r.status << "\","
        << r.iterations << ',' << num(r.v0) << ',' << num(r.vk) << ',' << num(r.vstar) << ','
        << num(r.abs_diff) << ',' << (r.pgc ? num(*r.pgc) : std::string()) << '\n';
  }
}

void write_runs_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "instance,start,approach,status,iterations,time_s,log\n";
  for (const BenchRecord& r : records) {
    out << r.instance << ',' << r.start << ',' << r.approach << ",\"" << r.status << "\","
        << r.iterations << ',' << num(r.time_s) << ',' << r.log_path << '\n';
  }
}

double best_at(const BenchRecord& rec, double t) {
  double best = rec.v0;
  for (const IterationLog& entry : rec.log) {
    if (entry.time_s > t) break;
    best = std::min(best, entry.g_best);
  }
  return best;
}

std::vector<ProfilePoint> progress_profile(std::span<const BenchRecord> records,
                                           std::span<const double> times) {
  std::vector<std::string> approaches;
  for (const BenchRecord& r : records) {
    if (r.failed) continue;
    if (std::find(approaches.begin(), approaches.end(), r.approach) == approaches.end()) {
      approaches.push_back(r.approach);
    }
  }
  std::vector<ProfilePoint> out;
  for (const std::string& ap : approaches) {
    for (double t : times) {
      ProfilePoint p{ap, t, 0.0, 0.0, 0};
      std::size_t pgc_runs = 0;
      for (const BenchRecord& r : records) {
        if (r.failed || r.approach != ap) continue;
        const double v = best_at(r, t);
        p.avg_abs_diff += v - r.vstar;
        if (r.v0 > r.vstar) {
          p.avg_pgc += percent_gap_closed(r.v0, v, r.vstar);
          ++pgc_runs;
        }
        ++p.runs;
      }
      if (p.runs > 0) p.avg_abs_diff /= static_cast<double>(p.runs);
      if (pgc_runs > 0) p.avg_pgc /= static_cast<double>(pgc_runs);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<double> profile_times(std::span<const BenchRecord> records, std::size_t points) {
  double t_max = 1e-4;
  for (const BenchRecord& r : records) {
    if (!r.log.empty()) t_max = std::max(t_max, r.log.back().time_s);
  }
  std::vector<double> times;
  if (points < 2) return {t_max};
  const double lo = std::log(1e-4);
  const double hi = std::log(t_max);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    times.push_back(i + 1 == points ? t_max : std::exp(lo + f * (hi - lo)));
  }
  return times;
}

void write_profile_csv(std::ostream& out, std::span<const ProfilePoint> profile) {
  out << "approach,time_s,avg_abs_diff,avg_pgc,runs\n";
  for (const ProfilePoint& p : profile) {
    out << p.approach << ',' << num(p.time_s) << ',' << num(p.avg_abs_diff) << ','
        << num(p.avg_pgc) << ',' << p.runs << '\n';
  }
}

}  // namespace reluinv
