#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "permbo/config.hpp"
#include "permbo/experiment.hpp"
#include "permbo/featurize.hpp"
#include "permbo/instance_io.hpp"
#include "permbo/permutation.hpp"
#include "permbo/problems.hpp"

namespace permbo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

inline constexpr const char* kOutputDirEnv = "PERMBO_OUTPUT_DIR";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Permutation parse_perm_arg(const std::string& text) {
  std::vector<int> v;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const auto item = io::trim(std::string_view(text).substr(start, comma - start));
    int x = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      throw UsageError("--perm expects comma-separated integers, got '" + text + "'");
    v.push_back(x);
    start = comma + 1;
  }
  try {
    return Permutation(std::move(v));
  } catch (const Error& e) {
    throw UsageError(std::string("--perm: ") + e.what());
  }
}

inline std::string join_features(const FeatureVector& f) {
  std::string s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) s += ',';
    s += format_number(f[i]);
  }
  return s;
}

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian optimization over permutations with sorting-based kernels", "permbo"};
  app.require_subcommand(1);

  // run ---------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Run a seeded experiment suite and write CSV results");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Key-value config file")->check(CLI::ExistingFile);
  std::map<std::string, std::string> overrides;
  std::vector<std::string> key_order;
  for (auto key : config_keys()) {
    key_order.emplace_back(key);
    run_cmd->add_option("--" + std::string(key), overrides[std::string(key)], "Overrides config key '" +
                                                                                 std::string(key) + "'");
  }

  // featurize ---------------------------------------------------------------
  auto* feat_cmd = app.add_subcommand("featurize", "Print the feature vector of a permutation as CSV");
  std::string perm_text, map_name = "concat";
  FeaturizerConfig feat_cfg;
  feat_cmd->add_option("--perm", perm_text, "Comma-separated zero-based permutation")->required();
  feat_cmd->add_option("--map", map_name, "enum, merge, mid, slide, shift or concat")
      ->check(CLI::IsMember({"enum", "merge", "mid", "slide", "shift", "concat"}));
  feat_cmd->add_option("--window", feat_cfg.window_length, "Sliding-window length");
  feat_cmd->add_option("--max_shift", feat_cfg.max_shift, "Shift histogram clip");
  feat_cmd->add_option("--mid", feat_cfg.enable_mid, "Include middle-split pairs in concat");
  feat_cmd->add_option("--slide", feat_cfg.enable_slide, "Include sliding-window motifs in concat");
  feat_cmd->add_option("--shift", feat_cfg.enable_shift, "Include shift histogram in concat");

  // oracle ------------------------------------------------------------------
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force the optimum of an instance (n <= 10)");
  std::string oracle_config;
  std::map<std::string, std::string> oracle_overrides;
  oracle_cmd->add_option("--config", oracle_config, "Key-value config file")->check(CLI::ExistingFile);
  for (auto key : {"problem", "instance", "n", "instance_seed", "nets"})
    oracle_cmd->add_option(std::string("--") + key, oracle_overrides[key], std::string("Problem key '") + key + "'");

  // lengths -----------------------------------------------------------------
  auto* len_cmd = app.add_subcommand("lengths", "Print feature lengths per map for a range of n");
  std::size_t len_n = 0, len_from = 1, len_to = 0;
  FeaturizerConfig len_cfg;
  len_cmd->add_option("--n", len_n, "Single permutation length");
  len_cmd->add_option("--from", len_from, "First n of a range");
  len_cmd->add_option("--to", len_to, "Last n of a range");
  len_cmd->add_option("--window", len_cfg.window_length, "Sliding-window length");
  len_cmd->add_option("--max_shift", len_cfg.max_shift, "Shift histogram clip");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("permbo");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = parse_config(read_file(config_path));
      if (const char* env = std::getenv(kOutputDirEnv); env && *env) cfg.output_dir = env;
      for (const auto& key : key_order)
        if (run_cmd->count("--" + key) > 0) apply_setting(cfg, key, overrides[key]);
      cfg.validate();
      const auto report = run_suite(cfg);
      write_suite(report, cfg.output_dir);
      out << aggregate_csv(report.aggregates);
      for (const auto& f : report.failures) err << "failed: " << f << '\n';
      for (const auto& r : report.runs)
        for (const auto& line : r.log) err << "warning: " << r.kernel << " seed " << r.seed << ": " << line << '\n';
      return report.failures.empty() ? kExitOk : kExitRuntime;
    }

    if (*feat_cmd) {
      const auto pi = parse_perm_arg(perm_text);
      FeatureVector f;
      if (map_name == "enum") f = phi_enum(pi);
      else if (map_name == "merge") f = phi_merge(pi);
      else if (map_name == "mid") f = phi_mid(pi);
      else if (map_name == "slide") f = phi_slide(pi, feat_cfg.window_length);
      else if (map_name == "shift") f = phi_shift(pi, feat_cfg.max_shift);
      else f = phi_concat(pi, feat_cfg);
      out << join_features(f) << '\n';
      return kExitOk;
    }

    if (*oracle_cmd) {
      ExperimentConfig cfg;
      if (!oracle_config.empty()) cfg = parse_config(read_file(oracle_config));
      for (const auto& [key, value] : oracle_overrides)
        if (oracle_cmd->count("--" + key) > 0) apply_setting(cfg, key, value);
      const auto obj = build_objective(cfg.problem);
      const auto [perm, value] = brute_force_optimum(obj);
      out << "problem=" << obj.name << '\n'
          << "n=" << obj.n << '\n'
          << "optimum=" << format_number(value) << '\n'
          << "permutation=" << join_features(FeatureVector(perm.begin(), perm.end())) << '\n';
      return kExitOk;
    }

    if (*len_cmd) {
      len_cfg.validate();
      std::size_t lo = len_from, hi = len_to;
      if (len_cmd->count("--n") > 0) lo = hi = len_n;
      if (lo < 1 || hi < lo) throw UsageError("lengths needs --n N or --from A --to B with 1 <= A <= B");
      out << "n,enum,merge,mid,slide,shift,concat\n";
      for (std::size_t n = lo; n <= hi; ++n) {
        out << n << ',' << feature_length(n, len_cfg, MapKind::Enum) << ','
            << feature_length(n, len_cfg, MapKind::Merge) << ',' << feature_length(n, len_cfg, MapKind::Mid) << ','
            << feature_length(n, len_cfg, MapKind::Slide) << ',' << feature_length(n, len_cfg, MapKind::Shift)
            << ',' << feature_length(n, len_cfg, MapKind::Concat) << '\n';
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace permbo::cli
