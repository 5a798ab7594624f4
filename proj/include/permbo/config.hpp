#pragma once

// Flat key-value experiment configuration.
//
// Grammar, one entry per line:
//
//   line    := blank | comment | entry
//   comment := '#' any*
//   entry   := key ws* '=' ws* value ws* [comment]
//   key     := [a-z_]+
//
// Later entries override earlier ones. Unknown keys are errors.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permbo/acquisition.hpp"
#include "permbo/error.hpp"
#include "permbo/featurize.hpp"
#include "permbo/instance_io.hpp"

namespace permbo {

enum class ProblemKind { Qap, Tsp, Floorplan, CellPlacement };

inline std::string_view to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Qap: return "qap";
    case ProblemKind::Tsp: return "tsp";
    case ProblemKind::Floorplan: return "fp";
    case ProblemKind::CellPlacement: return "cp";
  }
  return "?";
}

enum class Method { Merge, Mallows, Random };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Merge: return "merge";
    case Method::Mallows: return "mallows";
    case Method::Random: return "random";
  }
  return "?";
}

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Qap;
  std::string instance_path;  // empty: generate synthetically
  std::size_t n = 10;
  std::uint64_t instance_seed = 1;
  std::size_t nets = 0;  // cell placement; 0 means 2n
  std::optional<double> known_optimum;
  enum class BruteForce { Auto, Yes, No } brute_force = BruteForce::Auto;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<Method> methods = {Method::Merge};
  bool ablation = false;
  FeaturizerConfig featurizer;
  int iterations = 200;
  int repeats = 20;
  std::uint64_t base_seed = 0;
  int initial_design_size = 10;
  AcquisitionConfig acquisition;
  std::string output_dir = "permbo_out";
  bool timing = false;

  void validate() const {
    if (iterations < 1) throw Error(ErrorKind::ConfigError, "iterations must be >= 1");
    if (repeats < 1) throw Error(ErrorKind::ConfigError, "repeats must be >= 1");
    if (initial_design_size < 2) throw Error(ErrorKind::ConfigError, "initial_design must be >= 2");
    if (methods.empty()) throw Error(ErrorKind::ConfigError, "at least one kernel is required");
    if (problem.n < 2 && problem.instance_path.empty()) throw Error(ErrorKind::ConfigError, "n must be >= 2");
    featurizer.validate();
    acquisition.validate();
  }
};

/// Every recognised key, in documentation order.
inline const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = {
      "problem",   "instance",  "n",          "instance_seed",  "nets",     "known_optimum", "brute_force",
      "kernels",   "ablation",  "window",     "max_shift",      "mid",      "slide",         "shift",
      "iterations", "repeats",  "base_seed",  "initial_design", "restarts", "max_steps",     "xi",
      "output",    "timing"};
  return keys;
}

namespace detail {

inline std::string cfg_trim(std::string_view s) { return io::trim(s); }

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorKind::ConfigError, key + ": expected an integer, got '" + value + "'");
  return v;
}

inline double parse_real(const std::string& key, const std::string& value) {
  try {
    return io::to_number(io::Token{value, 0});
  } catch (const Error&) {
    throw Error(ErrorKind::ConfigError, key + ": expected a number, got '" + value + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  const auto v = io::upper(value);
  if (v == "TRUE" || v == "YES" || v == "1" || v == "ON") return true;
  if (v == "FALSE" || v == "NO" || v == "0" || v == "OFF") return false;
  throw Error(ErrorKind::ConfigError, key + ": expected a boolean, got '" + value + "'");
}

}  // namespace detail

/// Applies one key to the config.
inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_bool;
  using detail::parse_integer;
  using detail::parse_real;
  if (key == "problem") {
    const auto v = io::upper(value);
    if (v == "QAP") cfg.problem.kind = ProblemKind::Qap;
    else if (v == "TSP") cfg.problem.kind = ProblemKind::Tsp;
    else if (v == "FP") cfg.problem.kind = ProblemKind::Floorplan;
    else if (v == "CP") cfg.problem.kind = ProblemKind::CellPlacement;
    else throw Error(ErrorKind::ConfigError, "problem: expected qap, tsp, fp or cp, got '" + value + "'");
  } else if (key == "instance") {
    cfg.problem.instance_path = value;
  } else if (key == "n") {
    cfg.problem.n = parse_integer<std::size_t>(key, value);
  } else if (key == "instance_seed") {
    cfg.problem.instance_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "nets") {
    cfg.problem.nets = parse_integer<std::size_t>(key, value);
  } else if (key == "known_optimum") {
    cfg.problem.known_optimum = parse_real(key, value);
  } else if (key == "brute_force") {
    const auto v = io::upper(value);
    if (v == "AUTO") cfg.problem.brute_force = ProblemSpec::BruteForce::Auto;
    else cfg.problem.brute_force = parse_bool(key, value) ? ProblemSpec::BruteForce::Yes : ProblemSpec::BruteForce::No;
  } else if (key == "kernels") {
    std::vector<Method> methods;
    std::size_t start = 0;
    while (start <= value.size()) {
      auto comma = value.find(',', start);
      if (comma == std::string::npos) comma = value.size();
      const auto item = io::upper(detail::cfg_trim(std::string_view(value).substr(start, comma - start)));
      if (item == "MERGE") methods.push_back(Method::Merge);
      else if (item == "MALLOWS") methods.push_back(Method::Mallows);
      else if (item == "RANDOM") methods.push_back(Method::Random);
      else throw Error(ErrorKind::ConfigError, "kernels: unknown kernel '" + item + "'");
      start = comma + 1;
    }
    cfg.methods = std::move(methods);
  } else if (key == "ablation") {
    cfg.ablation = parse_bool(key, value);
  } else if (key == "window") {
    cfg.featurizer.window_length = parse_integer<int>(key, value);
  } else if (key == "max_shift") {
    cfg.featurizer.max_shift = parse_integer<int>(key, value);
  } else if (key == "mid") {
    cfg.featurizer.enable_mid = parse_bool(key, value);
  } else if (key == "slide") {
    cfg.featurizer.enable_slide = parse_bool(key, value);
  } else if (key == "shift") {
    cfg.featurizer.enable_shift = parse_bool(key, value);
  } else if (key == "iterations") {
    cfg.iterations = parse_integer<int>(key, value);
  } else if (key == "repeats") {
    cfg.repeats = parse_integer<int>(key, value);
  } else if (key == "base_seed") {
    cfg.base_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "initial_design") {
    cfg.initial_design_size = parse_integer<int>(key, value);
  } else if (key == "restarts") {
    cfg.acquisition.restarts = parse_integer<int>(key, value);
  } else if (key == "max_steps") {
    cfg.acquisition.max_steps = parse_integer<int>(key, value);
  } else if (key == "xi") {
    cfg.acquisition.xi = parse_real(key, value);
  } else if (key == "output") {
    cfg.output_dir = value;
  } else if (key == "timing") {
    cfg.timing = parse_bool(key, value);
  } else {
    throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
  }
}

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Parses the key-value text into entries in file order.
inline std::vector<ConfigEntry> parse_config_entries(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto t = detail::cfg_trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected 'key = value'");
    auto key = detail::cfg_trim(std::string_view(t).substr(0, eq));
    auto value = detail::cfg_trim(std::string_view(t).substr(eq + 1));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return (c >= 'a' && c <= 'z') || c == '_'; }))
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": bad key '" + key + "'");
    out.push_back({std::move(key), std::move(value), line_no});
  }
  return out;
}

inline ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {}) {
  for (const auto& entry : parse_config_entries(text)) {
    try {
      apply_setting(base, entry.key, entry.value);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(entry.line) + ": " + e.what());
    }
  }
  return base;
}

}  // namespace permbo
