#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "conedual/app/app.hpp"
#include "config_access.hpp"

namespace conedual::app {

using nlohmann::json;

MultiIndex parse_index(const json& j, int dim) {
  try {
    if (j.is_number_integer()) {
      if (dim != 1) throw ConfigError("integer index given for a " + std::to_string(dim) + "-dimensional problem");
      return MultiIndex({j.get<int>()});
    }
    if (j.is_string()) return parse_index_key(j.get<std::string>(), dim);
    if (j.is_array()) {
      std::vector<int> coords;
      for (const auto& c : j) {
        if (!c.is_number_integer()) throw ConfigError("index coordinates must be integers");
        coords.push_back(c.get<int>());
      }
      if (static_cast<int>(coords.size()) != dim) throw ConfigError("index has the wrong number of coordinates");
      return MultiIndex(std::move(coords));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad index: ") + e.what());
  }
  throw ConfigError("index must be an integer, a \"n1,...,nd\" string or an array");
}

SymmetricSequence parse_sequence(const json& literal) {
  if (!literal.is_object()) throw ConfigError("sequence literal must be an object");
  try {
    if (literal.contains("coefficients")) {
      const auto& c = literal.at("coefficients");
      if (!c.is_array() || c.empty()) throw ConfigError("\"coefficients\" must be a nonempty array");
      if (literal.contains("dim") && literal.at("dim") != 1) throw ConfigError("\"coefficients\" requires dim 1");
      std::vector<double> values;
      for (const auto& v : c) {
        if (!v.is_number()) throw ConfigError("coefficients must be numbers");
        values.push_back(v.get<double>());
      }
      return SymmetricSequence::from_coefficients(values);
    }
    if (!literal.contains("dim") || !literal.at("dim").is_number_integer()) {
      throw ConfigError("sequence literal needs an integer \"dim\"");
    }
    const int dim = literal.at("dim").get<int>();
    if (dim < 1) throw ConfigError("sequence dim must be >= 1");
    std::map<MultiIndex, double> values;
    if (literal.contains("entries")) {
      const auto& e = literal.at("entries");
      if (!e.is_object()) throw ConfigError("\"entries\" must be an object");
      for (const auto& [key, value] : e.items()) {
        if (!value.is_number()) throw ConfigError("entry \"" + key + "\" must be a number");
        const MultiIndex n = parse_index_key(key, dim);
        if (values.contains(n)) throw ConfigError("duplicate entry \"" + key + "\"");
        values[n] = value.get<double>();
      }
    }
    return SymmetricSequence(dim, values);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad sequence literal: ") + e.what());
  }
}

json sequence_to_json(const SymmetricSequence& s) {
  json entries = json::object();
  for (const auto& [n, v] : s.entries()) entries[format_index_key(n)] = v;
  return json{{"dim", s.dim()}, {"entries", std::move(entries)}};
}

json parse_config_text(const std::string& text) {
  json config;
  try {
    config = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  if (!config.contains("command") || !config.at("command").is_string()) {
    throw ConfigError("config needs a string \"command\"");
  }
  return config;
}

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

namespace detail {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown field \"" + key + "\"");
  }
}

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ConfigError(std::string("missing required field \"") + key + "\"");
  return obj.at(key);
}

std::int64_t get_int(const json& obj, const char* key, std::optional<std::int64_t> fallback) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required field \"") + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

double get_number(const json& obj, const char* key, std::optional<double> fallback) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(std::string("missing required field \"") + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

std::vector<std::int64_t> get_int_list(const json& obj, const char* key) {
  const json& v = require(obj, key);
  std::vector<std::int64_t> out;
  if (v.is_number_integer()) {
    out.push_back(v.get<std::int64_t>());
    return out;
  }
  if (!v.is_array() || v.empty()) throw ConfigError(std::string("field \"") + key + "\" must be a nonempty integer list");
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(std::string("field \"") + key + "\" must contain integers");
    out.push_back(e.get<std::int64_t>());
  }
  return out;
}

}  // namespace detail

}  // namespace conedual::app
