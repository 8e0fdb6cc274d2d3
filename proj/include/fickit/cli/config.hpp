#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "fickit/error.hpp"

namespace fickit::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Seed whose neutrino draw at N = 100 has the FIC minimum at n = 2 for both
/// Fourier algorithms.
inline constexpr std::uint64_t kDefaultSeed = 12;

struct ExperimentConfig {
  std::string experiment = "neutrino_sweep";  // neutrino_sweep | landscape | oracle_suite | evt_table
  std::size_t sample_size = 100;
  std::size_t replicates = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> algorithms{"sequential", "greedy"};
  std::size_t nesting_min = 0;
  std::size_t nesting_max = 10;
  bool truth_known = true;
  std::string output_dir = "out";
  std::string complexity_cache;  // empty: no lookup table

  std::string landscape_model = "sine";  // sine | linear
  double theta1_min = -0.5;
  double theta1_max = 0.5;
  std::size_t theta1_steps = 41;
  double theta2_min = 0.3;
  double theta2_max = 1.5566370614359172;  // 0.3 + 20 * (2 pi / 100)
  std::size_t theta2_steps = 161;
  double truth_theta1 = 0.0;
  double truth_theta2 = 0.9;

  std::vector<std::size_t> m_values{1, 2, 10, 20, 100, 1000};
  std::vector<std::size_t> nu_values{1, 2, 3};

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  void validate() const {
    static const std::set<std::string> experiments{"neutrino_sweep", "landscape", "oracle_suite", "evt_table"};
    if (!experiments.count(experiment)) throw InvalidArgument("unknown experiment '" + experiment + "'");
    if (sample_size < 1) throw InvalidArgument("sample_size must be positive");
    if (replicates < 2) throw InvalidArgument("replicates must be at least 2");
    if (algorithms.empty()) throw InvalidArgument("algorithms must name at least one algorithm");
    std::set<std::string> seen;
    for (const auto& a : algorithms) {
      if (a != "sequential" && a != "greedy") throw InvalidArgument("unknown algorithm '" + a + "'");
      if (!seen.insert(a).second) throw InvalidArgument("algorithm '" + a + "' listed twice");
    }
    if (nesting_min > nesting_max) throw InvalidArgument("nesting_min must not exceed nesting_max");
    if (output_dir.empty()) throw InvalidArgument("output_dir must not be empty");
    if (landscape_model != "sine" && landscape_model != "linear")
      throw InvalidArgument("landscape_model must be 'sine' or 'linear'");
    if (theta1_steps < 1 || theta2_steps < 1) throw InvalidArgument("grid steps must be positive");
    if (m_values.empty() || nu_values.empty()) throw InvalidArgument("m_values and nu_values must be nonempty");
    for (auto m : m_values)
      if (m < 1) throw InvalidArgument("m_values entries must be positive");
    for (auto nu : nu_values)
      if (nu < 1) throw InvalidArgument("nu_values entries must be positive");
  }
};

namespace detail {

template <class T>
  requires std::is_unsigned_v<T> && (!std::is_same_v<T, bool>)
void read_field(const nlohmann::json& v, const char* key, T& out) {
  if (!v.is_number_unsigned()) throw InvalidArgument(std::string("config key '") + key + "' must be a non-negative integer");
  out = v.get<T>();
}
inline void read_field(const nlohmann::json& v, const char* key, double& out) {
  if (!v.is_number()) throw InvalidArgument(std::string("config key '") + key + "' must be a number");
  out = v.get<double>();
}
inline void read_field(const nlohmann::json& v, const char* key, bool& out) {
  if (!v.is_boolean()) throw InvalidArgument(std::string("config key '") + key + "' must be true or false");
  out = v.get<bool>();
}
inline void read_field(const nlohmann::json& v, const char* key, std::string& out) {
  if (!v.is_string()) throw InvalidArgument(std::string("config key '") + key + "' must be a string");
  out = v.get<std::string>();
}
template <class T>
void read_field(const nlohmann::json& v, const char* key, std::vector<T>& out) {
  if (!v.is_array()) throw InvalidArgument(std::string("config key '") + key + "' must be an array");
  out.clear();
  for (const auto& e : v) read_field(e, key, out.emplace_back());
}

#define FICKIT_CONFIG_FIELDS(X) \
  X(experiment)                 \
  X(sample_size)                \
  X(replicates)                 \
  X(seed)                       \
  X(algorithms)                 \
  X(nesting_min)                \
  X(nesting_max)                \
  X(truth_known)                \
  X(output_dir)                 \
  X(complexity_cache)           \
  X(landscape_model)            \
  X(theta1_min)                 \
  X(theta1_max)                 \
  X(theta1_steps)               \
  X(theta2_min)                 \
  X(theta2_max)                 \
  X(theta2_steps)               \
  X(truth_theta1)               \
  X(truth_theta2)               \
  X(m_values)                   \
  X(nu_values)

}  // namespace detail

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
#define FICKIT_PUT(name) j[#name] = c.name;
  FICKIT_CONFIG_FIELDS(FICKIT_PUT)
#undef FICKIT_PUT
  return j;
}

/// Strict: unknown keys and wrongly typed values are errors; absent keys
/// keep their defaults.
inline ExperimentConfig from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  static const std::set<std::string> known{
#define FICKIT_NAME(name) #name,
      FICKIT_CONFIG_FIELDS(FICKIT_NAME)
#undef FICKIT_NAME
  };
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw InvalidArgument("unknown config key '" + key + "'");
  ExperimentConfig c;
#define FICKIT_GET(name) \
  if (j.contains(#name)) detail::read_field(j.at(#name), #name, c.name);
  FICKIT_CONFIG_FIELDS(FICKIT_GET)
#undef FICKIT_GET
  c.validate();
  return c;
}

#undef FICKIT_CONFIG_FIELDS

inline std::string serialize(const ExperimentConfig& c) { return to_json(c).dump(2) + "\n"; }

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace fickit::cli
