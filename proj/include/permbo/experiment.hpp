#pragma once

// Bayesian-optimization driver, regret metrics and the seeded multi-run
// protocol with CSV output.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "permbo/acquisition.hpp"
#include "permbo/config.hpp"
#include "permbo/error.hpp"
#include "permbo/featurize.hpp"
#include "permbo/gp.hpp"
#include "permbo/instance_io.hpp"
#include "permbo/permutation.hpp"
#include "permbo/problems.hpp"

namespace permbo {

// ---------------------------------------------------------------------------
// Problems

inline Objective build_objective(const ProblemSpec& spec) {
  const bool from_file = !spec.instance_path.empty();
  const auto stem = [&] { return std::filesystem::path(spec.instance_path).stem().string(); };
  const auto synthetic = [&](std::string_view kind) {
    return std::string(kind) + "-synthetic-n" + std::to_string(spec.n) + "-s" + std::to_string(spec.instance_seed);
  };
  Objective obj;
  switch (spec.kind) {
    case ProblemKind::Qap:
      obj = from_file ? make_objective("qap-" + stem(), parse_qaplib(read_file(spec.instance_path)))
                      : make_objective(synthetic("qap"), generate_qap(spec.n, spec.instance_seed));
      break;
    case ProblemKind::Tsp:
      obj = from_file ? make_objective("tsp-" + stem(), parse_tsplib(read_file(spec.instance_path)))
                      : make_objective(synthetic("tsp"), generate_tsp(spec.n, spec.instance_seed));
      break;
    case ProblemKind::Floorplan:
      if (from_file) throw Error(ErrorKind::ConfigError, "floor planning instances are synthetic only");
      obj = make_objective(synthetic("fp"), generate_floorplan(spec.n, spec.instance_seed));
      break;
    case ProblemKind::CellPlacement:
      if (from_file) throw Error(ErrorKind::ConfigError, "cell placement instances are synthetic only");
      obj = make_objective(synthetic("cp"),
                           generate_netlist(spec.n, spec.nets ? spec.nets : 2 * spec.n, spec.instance_seed));
      break;
  }
  if (spec.known_optimum) obj.known_optimum = spec.known_optimum;
  return obj;
}

/// Where regret is measured from, and how that value was obtained.
struct RegretReference {
  std::optional<double> value;
  std::string source;  // "declared", "brute-force" or "best-found"
};

inline RegretReference resolve_reference(const Objective& obj, ProblemSpec::BruteForce policy) {
  if (obj.known_optimum) return {obj.known_optimum, "declared"};
  const bool brute = policy == ProblemSpec::BruteForce::Yes ||
                     (policy == ProblemSpec::BruteForce::Auto && obj.n <= kMaxBruteForceSize);
  if (brute) return {brute_force_optimum(obj).second, "brute-force"};
  return {std::nullopt, "best-found"};
}

// ---------------------------------------------------------------------------
// Records and metrics

struct IterationRecord {
  int iteration = 0;  // 0 for the initial design, 1..T for BO iterations
  Permutation perm = Permutation::identity(1);
  double value = 0.0;
  double best_so_far = 0.0;
  double regret = 0.0;
  double elapsed_ms = 0.0;
};

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  std::string kernel;
  std::vector<IterationRecord> steps;
  std::optional<double> reference;
  bool exhausted = false;
  int gp_fallbacks = 0;
  std::vector<std::string> log;

  double best() const { return steps.empty() ? INFINITY : steps.back().best_so_far; }
};

/// Sets regret = best_so_far - reference on every step.
inline void apply_reference(RunRecord& record, double reference) {
  record.reference = reference;
  for (auto& s : record.steps) s.regret = s.best_so_far - reference;
}

/// Regret at the last iteration.
inline double simple_regret(const RunRecord& record) {
  if (!record.reference) throw Error(ErrorKind::MissingOptimum, "run has no regret reference");
  if (record.steps.empty()) throw Error(ErrorKind::InvalidArgument, "empty run record");
  return record.steps.back().regret;
}

/// Sum of per-iteration regret over the BO iterations.
inline double regret_auc(const RunRecord& record) {
  if (!record.reference) throw Error(ErrorKind::MissingOptimum, "run has no regret reference");
  double auc = 0.0;
  for (const auto& s : record.steps)
    if (s.iteration >= 1) auc += s.regret;
  return auc;
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {NAN, NAN};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

// ---------------------------------------------------------------------------
// One BO run

/// A method plus the descriptor configuration it runs with.
struct Variant {
  std::string label;
  Method method = Method::Merge;
  FeaturizerConfig featurizer;
};

inline std::vector<Variant> variants_for(const ExperimentConfig& cfg) {
  std::vector<Variant> out;
  for (Method m : cfg.methods) {
    if (m == Method::Merge && cfg.ablation) {
      auto base = cfg.featurizer;
      base.enable_mid = base.enable_slide = base.enable_shift = true;
      auto no_mid = base, no_slide = base, no_shift = base;
      no_mid.enable_mid = false;
      no_slide.enable_slide = false;
      no_shift.enable_shift = false;
      out.push_back({"merge-all", m, base});
      out.push_back({"merge-no-mid", m, no_mid});
      out.push_back({"merge-no-slide", m, no_slide});
      out.push_back({"merge-no-shift", m, no_shift});
    } else {
      out.push_back({std::string(to_string(m)), m, cfg.featurizer});
    }
  }
  return out;
}

/// Initial design of distinct uniform permutations, then `iterations` rounds
/// of fit, propose, evaluate. Stops early only if every permutation has been
/// evaluated. Regret is filled in when `reference` is known.
inline RunRecord run_bo(const ExperimentConfig& cfg, const Objective& objective, const Variant& variant,
                        std::uint64_t seed, std::optional<double> reference = std::nullopt) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  Rng rng(seed);
  const std::size_t n = objective.n;
  const double space_size = factorial(n);
  const Featurizer featurizer{variant.method == Method::Mallows ? KernelKind::Mallows : KernelKind::Merge,
                              variant.featurizer};

  RunRecord rec;
  rec.seed = seed;
  rec.kernel = variant.label;

  std::set<Permutation> evaluated;
  std::vector<Permutation> points;
  std::vector<FeatureVector> features;
  std::vector<double> values;
  std::optional<Permutation> incumbent;
  double best = INFINITY;

  auto record = [&](int iteration, const Permutation& p, Clock::time_point started) {
    const double v = objective(p);
    evaluated.insert(p);
    points.push_back(p);
    values.push_back(v);
    if (variant.method != Method::Random) features.push_back(featurizer(p));
    if (v < best) {
      best = v;
      incumbent = p;
    }
    const double ms =
        cfg.timing ? std::chrono::duration<double, std::milli>(Clock::now() - started).count() : 0.0;
    rec.steps.push_back({iteration, p, v, best, 0.0, ms});
  };

  const auto initial = static_cast<std::size_t>(std::min<double>(cfg.initial_design_size, space_size));
  while (evaluated.size() < initial) {
    const auto started = Clock::now();
    auto p = random_permutation(n, rng);
    if (!evaluated.contains(p)) record(0, p, started);
  }

  for (int t = 1; t <= cfg.iterations; ++t) {
    if (static_cast<double>(evaluated.size()) >= space_size) {
      rec.exhausted = true;
      rec.log.push_back("search space exhausted before iteration " + std::to_string(t));
      break;
    }
    const auto started = Clock::now();
    std::optional<Permutation> next;
    if (variant.method != Method::Random) {
      try {
        const auto model = GPModel::fit(features, values);
        next = propose(model, featurizer, evaluated, *incumbent, cfg.acquisition, rng);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SearchSpaceExhausted) throw;
        ++rec.gp_fallbacks;
        rec.log.push_back("iteration " + std::to_string(t) + ": " + e.what() + "; proposing at random");
      }
    }
    if (!next) next = detail::random_unevaluated(n, evaluated, rng);
    record(t, *next, started);
  }

  if (reference) apply_reference(rec, *reference);
  return rec;
}

/// Single-run entry point: the first configured method on the configured problem.
inline RunRecord run_bo(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto obj = build_objective(cfg.problem);
  const auto ref = resolve_reference(obj, cfg.problem.brute_force);
  return run_bo(cfg, obj, variants_for(cfg).front(), seed, ref.value);
}

// ---------------------------------------------------------------------------
// Suite

struct AggregateRow {
  std::string kernel;
  std::string problem;
  MeanStd final_regret;
  MeanStd auc;
  int repeats = 0;
};

struct SuiteReport {
  std::string problem;
  RegretReference reference;
  std::vector<RunRecord> runs;  // variant-major, then seed order
  std::vector<AggregateRow> aggregates;
  std::vector<std::string> failures;
};

inline std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& runs, const std::string& problem) {
  std::vector<AggregateRow> rows;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_kernel;
  std::vector<std::string> order;
  for (const auto& r : runs) {
    auto [it, inserted] = by_kernel.try_emplace(r.kernel);
    if (inserted) order.push_back(r.kernel);
    it->second.first.push_back(simple_regret(r));
    it->second.second.push_back(regret_auc(r));
  }
  for (const auto& k : order) {
    const auto& [finals, aucs] = by_kernel[k];
    rows.push_back({k, problem, mean_std(finals), mean_std(aucs), static_cast<int>(finals.size())});
  }
  return rows;
}

/// Runs every variant on seeds base_seed + k, k < repeats. All variants see
/// the same seed sequence, so their initial designs coincide.
inline SuiteReport run_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto obj = build_objective(cfg.problem);
  SuiteReport report;
  report.problem = obj.name;
  report.reference = resolve_reference(obj, cfg.problem.brute_force);

  for (const auto& variant : variants_for(cfg)) {
    for (int k = 0; k < cfg.repeats; ++k) {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(k);
      try {
        auto rec = run_bo(cfg, obj, variant, seed, report.reference.value);
        rec.run_id = k;
        report.runs.push_back(std::move(rec));
      } catch (const std::exception& e) {
        report.failures.push_back(variant.label + " seed " + std::to_string(seed) + ": " + e.what());
      }
    }
  }

  if (!report.reference.value && !report.runs.empty()) {
    double best = INFINITY;
    for (const auto& r : report.runs) best = std::min(best, r.best());
    report.reference.value = best;
    for (auto& r : report.runs) apply_reference(r, best);
  }
  report.aggregates = aggregate(report.runs, report.problem);
  return report;
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest decimal form that parses back to the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

inline constexpr std::string_view kRunCsvHeader = "run_id,seed,kernel,iteration,value,best_so_far,regret,elapsed_ms";
inline constexpr std::string_view kAggregateCsvHeader =
    "kernel,problem,mean_final_regret,std_final_regret,mean_auc,std_auc,repeats";

inline void write_run_rows(std::ostream& os, const RunRecord& r) {
  for (const auto& s : r.steps) {
    os << r.run_id << ',' << r.seed << ',' << r.kernel << ',' << s.iteration << ',' << format_number(s.value) << ','
       << format_number(s.best_so_far) << ',' << format_number(s.regret) << ',' << format_number(s.elapsed_ms)
       << '\n';
  }
}

inline std::string run_csv(const RunRecord& r) {
  std::ostringstream os;
  os << kRunCsvHeader << '\n';
  write_run_rows(os, r);
  return os.str();
}

inline std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << kAggregateCsvHeader << '\n';
  for (const auto& a : rows)
    os << a.kernel << ',' << a.problem << ',' << format_number(a.final_regret.mean) << ','
       << format_number(a.final_regret.std) << ',' << format_number(a.auc.mean) << ',' << format_number(a.auc.std)
       << ',' << a.repeats << '\n';
  return os.str();
}

inline std::string run_file_name(const RunRecord& r) {
  return r.kernel + "_seed" + std::to_string(r.seed) + ".csv";
}

/// Writes runs/<kernel>_seed<seed>.csv per run, then iterations.csv (all runs
/// concatenated in report order), aggregate.csv and meta.txt.
inline void write_suite(const SuiteReport& report, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "runs");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + p.string() + "'");
    out << text;
  };
  std::ostringstream merged;
  merged << kRunCsvHeader << '\n';
  for (const auto& r : report.runs) {
    write(dir / "runs" / run_file_name(r), run_csv(r));
    write_run_rows(merged, r);
  }
  write(dir / "iterations.csv", merged.str());
  write(dir / "aggregate.csv", aggregate_csv(report.aggregates));

  std::ostringstream meta;
  meta << "problem=" << report.problem << '\n';
  meta << "reference=" << (report.reference.value ? format_number(*report.reference.value) : "none") << '\n';
  meta << "reference_source=" << report.reference.source << '\n';
  for (const auto& f : report.failures) meta << "failed=" << f << '\n';
  for (const auto& r : report.runs)
    for (const auto& line : r.log) meta << "log=" << r.kernel << " seed " << r.seed << ": " << line << '\n';
  write(dir / "meta.txt", meta.str());
}

/// Recomputes the aggregate table from a merged iterations CSV.
inline std::vector<AggregateRow> aggregate_from_csv(std::string_view csv, const std::string& problem) {
  std::vector<RunRecord> runs;
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::size_t pos = 0, line_no = 0;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    const auto line = csv.substr(pos, nl - pos);
    pos = nl + 1;
    if (line_no++ == 0 || line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t s = 0;
    while (true) {
      const auto c = line.find(',', s);
      f.push_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (f.size() != 8) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 8 fields");
    auto num = [&](std::string_view t) { return io::to_number(io::Token{t, line_no}); };
    const int run_id = static_cast<int>(num(f[0]));
    const std::string kernel(f[2]);
    auto [it, inserted] = index.try_emplace({kernel, run_id}, runs.size());
    if (inserted) {
      RunRecord r;
      r.run_id = run_id;
      r.seed = static_cast<std::uint64_t>(num(f[1]));
      r.kernel = kernel;
      r.reference = 0.0;  // regrets are read, not recomputed
      runs.push_back(std::move(r));
    }
    IterationRecord step;
    step.iteration = static_cast<int>(num(f[3]));
    step.value = num(f[4]);
    step.best_so_far = num(f[5]);
    step.regret = num(f[6]);
    step.elapsed_ms = num(f[7]);
    runs[it->second].steps.push_back(std::move(step));
  }
  return aggregate(runs, problem);
}

}  // namespace permbo
