#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "reluinv/network.hpp"

namespace reluinv::detail {

nlohmann::json parse_json(std::string_view text, const std::string& what);
const nlohmann::json& get_field(const nlohmann::json& obj, const char* key, const std::string& where);
std::size_t get_size(const nlohmann::json& obj, const char* key, const std::string& where);
double get_double(const nlohmann::json& obj, const char* key, const std::string& where);
double to_double(const nlohmann::json& v, const std::string& where);
// Rejects non-numeric and non-finite entries.
Vector to_vector(const nlohmann::json& arr, const std::string& where);
nlohmann::json from_vector(const Vector& v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace reluinv::detail
