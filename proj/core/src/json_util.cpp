#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "reluinv/errors.hpp"

namespace reluinv::detail {

using nlohmann::json;

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

const json& get_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidInput(where + ": missing field \"" + key + "\"");
  return *it;
}

std::size_t get_size(const json& obj, const char* key, const std::string& where) {
  const json& v = get_field(obj, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InvalidInput(where + ": \"" + key + "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

double to_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw InvalidInput(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InvalidInput(where + ": non-finite value");
  return d;
}

double get_double(const json& obj, const char* key, const std::string& where) {
  return to_double(get_field(obj, key, where), where + " \"" + key + "\"");
}

Vector to_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw InvalidInput(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = to_double(arr[i], where);
  }
  return v;
}

json from_vector(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidInput("failed writing " + path.string());
}

}  // namespace reluinv::detail
