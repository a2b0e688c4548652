#include "reluinv/instance_io.hpp"

#include <cmath>
#include <set>

#include "reluinv/errors.hpp"
#include "json_util.hpp"

namespace reluinv {

using nlohmann::json;

void Instance::validate(const Network& net) const {
  domain.validate();
  if (domain.dim() != net.input_dim()) {
    throw InvalidInput("instance box has " + std::to_string(domain.dim()) +
                       " entries but the model takes " + std::to_string(net.input_dim()) +
                       " inputs");
  }
  if (static_cast<std::size_t>(target.size()) != net.output_dim()) {
    throw InvalidInput("instance target has " + std::to_string(target.size()) +
                       " entries but the model has " + std::to_string(net.output_dim()) +
                       " outputs");
  }
  if (!target.allFinite()) throw InvalidInput("instance target must be finite");
  for (const Vector& s : starts) {
    if (static_cast<std::size_t>(s.size()) != domain.dim() || !s.allFinite()) {
      throw InvalidInput("instance start has the wrong size or a non-finite entry");
    }
  }
}

namespace {

RowSense parse_sense(const json& v) {
  if (!v.is_string()) throw InvalidInput("instance: constraint sense must be a string");
  const std::string s = v.get<std::string>();
  if (s == "eq") return RowSense::Equal;
  if (s == "le") return RowSense::LessEqual;
  if (s == "ge") return RowSense::GreaterEqual;
  throw InvalidInput("instance: constraint sense must be eq, le or ge, not '" + s + "'");
}

const char* sense_name(RowSense s) {
  switch (s) {
    case RowSense::Equal:
      return "eq";
    case RowSense::LessEqual:
      return "le";
    case RowSense::GreaterEqual:
      return "ge";
  }
  return "eq";
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidInput(where + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw InvalidInput(where + ": unknown field \"" + item.key() + "\"");
    }
  }
}

template <class T>
void read_double(const json& obj, const char* key, T& out, const std::string& where) {
  if (obj.contains(key)) out = detail::get_double(obj, key, where);
}

void read_size(const json& obj, const char* key, std::size_t& out, const std::string& where) {
  if (obj.contains(key)) out = detail::get_size(obj, key, where);
}

}  // namespace

Instance parse_instance(std::string_view json_text) {
  const std::string where = "instance";
  const json j = detail::parse_json(json_text, where);
  check_keys(j, {"model", "target", "box_lo", "box_hi", "linear_constraints", "starts", "seed"},
             where);
  Instance inst;
  const json& model = detail::get_field(j, "model", where);
  if (!model.is_string()) throw InvalidInput("instance: \"model\" must be a path string");
  inst.model = model.get<std::string>();
  inst.target = detail::to_vector(detail::get_field(j, "target", where), "instance target");
  inst.domain.lower = detail::to_vector(detail::get_field(j, "box_lo", where), "instance box_lo");
  inst.domain.upper = detail::to_vector(detail::get_field(j, "box_hi", where), "instance box_hi");
  if (j.contains("linear_constraints")) {
    const json& rows = j["linear_constraints"];
    if (!rows.is_array()) throw InvalidInput("instance: linear_constraints must be an array");
    for (const json& r : rows) {
      check_keys(r, {"coeffs", "rhs", "sense"}, "instance constraint");
      inst.domain.constraints.push_back(
          {detail::to_vector(detail::get_field(r, "coeffs", where), "instance constraint coeffs"),
           detail::get_double(r, "rhs", "instance constraint"),
           parse_sense(detail::get_field(r, "sense", where))});
    }
  }
  if (j.contains("starts")) {
    const json& starts = j["starts"];
    if (!starts.is_array()) throw InvalidInput("instance: starts must be an array of points");
    for (const json& s : starts) inst.starts.push_back(detail::to_vector(s, "instance start"));
  }
  if (j.contains("seed")) inst.seed = detail::get_size(j, "seed", where);
  inst.domain.validate();
  return inst;
}

std::string dump_instance(const Instance& inst) {
  json j;
  j["model"] = inst.model;
  j["target"] = detail::from_vector(inst.target);
  j["box_lo"] = detail::from_vector(inst.domain.lower);
  j["box_hi"] = detail::from_vector(inst.domain.upper);
  json rows = json::array();
  for (const LinearConstraint& c : inst.domain.constraints) {
    rows.push_back({{"coeffs", detail::from_vector(c.coeffs)},
                    {"rhs", c.rhs},
                    {"sense", sense_name(c.sense)}});
  }
  j["linear_constraints"] = std::move(rows);
  json starts = json::array();
  for (const Vector& s : inst.starts) starts.push_back(detail::from_vector(s));
  j["starts"] = std::move(starts);
  j["seed"] = inst.seed;
  return j.dump(2) + "\n";
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(detail::read_text_file(path));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  detail::write_text_file(path, dump_instance(inst));
}

std::filesystem::path model_path(const Instance& inst, const std::filesystem::path& instance_path) {
  const std::filesystem::path p(inst.model);
  if (p.is_absolute()) return p;
  return instance_path.parent_path() / p;
}

OgoConfig parse_ogo_config(std::string_view json_text) {
  const std::string where = "OGO config";
  const json j = detail::parse_json(json_text, where);
  check_keys(j,
             {"step", "step_min", "step_max", "neighborhood", "shrink", "expand", "epsilon",
              "max_iterations", "tau", "pattern_cap", "oc_tolerance", "time_limit_s"},
             where);
  OgoConfig c;
  read_double(j, "step", c.step, where);
  if (j.contains("step_min") && !j["step_min"].is_null()) {
    c.step_min = detail::get_double(j, "step_min", where);
  }
  read_double(j, "step_max", c.step_max, where);
  read_double(j, "neighborhood", c.neighborhood, where);
  read_double(j, "shrink", c.shrink, where);
  read_double(j, "expand", c.expand, where);
  read_double(j, "epsilon", c.epsilon, where);
  read_size(j, "max_iterations", c.max_iterations, where);
  read_double(j, "tau", c.tau, where);
  read_size(j, "pattern_cap", c.pattern_cap, where);
  read_double(j, "oc_tolerance", c.oc_tolerance, where);
  read_double(j, "time_limit_s", c.time_limit_s, where);
  return c;
}

PgdConfig parse_pgd_config(std::string_view json_text) {
  const std::string where = "PGD config";
  const json j = detail::parse_json(json_text, where);
  check_keys(j,
             {"scale", "step", "max_iterations", "stall_limit", "projection_period",
              "time_limit_s"},
             where);
  PgdConfig c;
  read_double(j, "scale", c.scale, where);
  read_double(j, "step", c.step, where);
  read_size(j, "max_iterations", c.max_iterations, where);
  read_size(j, "stall_limit", c.stall_limit, where);
  read_size(j, "projection_period", c.projection_period, where);
  read_double(j, "time_limit_s", c.time_limit_s, where);
  c.validate();
  return c;
}

std::string dump_ogo_config(const OgoConfig& c) {
  json j{{"step", c.step},
         {"step_max", c.step_max},
         {"neighborhood", c.neighborhood},
         {"shrink", c.shrink},
         {"expand", c.expand},
         {"epsilon", c.epsilon},
         {"max_iterations", c.max_iterations},
         {"tau", c.tau},
         {"pattern_cap", c.pattern_cap},
         {"oc_tolerance", c.oc_tolerance},
         {"time_limit_s", c.time_limit_s}};
  j["step_min"] = c.step_min ? json(*c.step_min) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string dump_pgd_config(const PgdConfig& c) {
  const json j{{"scale", c.scale},
               {"step", c.step},
               {"max_iterations", c.max_iterations},
               {"stall_limit", c.stall_limit},
               {"projection_period", c.projection_period},
               {"time_limit_s", c.time_limit_s}};
  return j.dump(2) + "\n";
}

}  // namespace reluinv
