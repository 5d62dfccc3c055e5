#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace conedual::app::detail {

void check_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& where);
const nlohmann::json& require(const nlohmann::json& obj, const char* key);
std::int64_t get_int(const nlohmann::json& obj, const char* key, std::optional<std::int64_t> fallback = {});
double get_number(const nlohmann::json& obj, const char* key, std::optional<double> fallback = {});
std::vector<std::int64_t> get_int_list(const nlohmann::json& obj, const char* key);

}  // namespace conedual::app::detail
