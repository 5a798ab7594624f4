#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "permbo/error.hpp"
#include "permbo/featurize.hpp"
#include "permbo/gp.hpp"
#include "permbo/permutation.hpp"

namespace permbo {

struct AcquisitionConfig {
  int restarts = 10;
  int max_steps = 100;
  double xi = 0.0;

  void validate() const {
    if (restarts < 1) throw Error(ErrorKind::InvalidArgument, "restarts must be >= 1");
    if (max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be >= 1");
    if (!(xi >= 0.0)) throw Error(ErrorKind::InvalidArgument, "xi must be >= 0");
  }
};

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Expected improvement below `best` (minimization).
inline double expected_improvement(double mean, double variance, double best, double xi) {
  const double gain = best - xi - mean;
  const double s = std::sqrt(std::max(variance, 0.0));
  if (s == 0.0) return std::max(gain, 0.0);
  const double z = gain / s;
  return std::max(0.0, gain * normal_cdf(z) + s * normal_pdf(z));
}

namespace detail {

struct Scored {
  Permutation perm;
  double ei;
};

// Higher EI wins; equal EI goes to the lexicographically smaller permutation.
inline bool better(const Scored& a, const Scored& b) {
  if (a.ei != b.ei) return a.ei > b.ei;
  return a.perm < b.perm;
}

inline Permutation random_unevaluated(std::size_t n, const std::set<Permutation>& evaluated, Rng& rng) {
  constexpr int kDraws = 1000;
  for (int t = 0; t < kDraws; ++t) {
    auto p = random_permutation(n, rng);
    if (!evaluated.contains(p)) return p;
  }
  // Dense coverage: pick uniformly among the remaining points by enumeration.
  const auto remaining = static_cast<std::uint64_t>(factorial(n)) - evaluated.size();
  auto target = uniform_below(rng, remaining);
  std::optional<Permutation> found;
  for_each_permutation(n, [&](const Permutation& p) {
    if (found || evaluated.contains(p)) return;
    if (target == 0) found = p;
    else --target;
  });
  return *found;
}

}  // namespace detail

/// Maximizes EI by hill climbing over swap neighborhoods from cfg.restarts
/// starts: the incumbent first, then uniform random permutations. Returns the
/// best unevaluated endpoint, else the best unevaluated point seen during the
/// climbs, else a random unevaluated permutation.
inline Permutation propose(const GPModel& model, const Featurizer& featurizer, const std::set<Permutation>& evaluated,
                           const Permutation& incumbent, const AcquisitionConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = incumbent.size();
  if (evaluated.empty()) throw Error(ErrorKind::InvalidArgument, "propose needs at least one evaluated point");
  if (static_cast<double>(evaluated.size()) >= factorial(n))
    throw Error(ErrorKind::SearchSpaceExhausted, "all " + std::to_string(evaluated.size()) + " permutations evaluated");

  double best_observed = model.train_targets().front();
  for (double t : model.train_targets()) best_observed = std::min(best_observed, t);

  std::map<Permutation, double> cache;
  auto score = [&](const Permutation& p) {
    if (auto it = cache.find(p); it != cache.end()) return it->second;
    const auto pred = model.predict(featurizer(p));
    const double ei = expected_improvement(pred.mean, pred.variance, best_observed, cfg.xi);
    cache.emplace(p, ei);
    return ei;
  };

  std::optional<detail::Scored> best_endpoint;
  std::optional<detail::Scored> best_seen;
  auto note_seen = [&](const detail::Scored& s) {
    if (evaluated.contains(s.perm)) return;
    if (!best_seen || detail::better(s, *best_seen)) best_seen = s;
  };

  for (int r = 0; r < cfg.restarts; ++r) {
    detail::Scored current{r == 0 ? incumbent : random_permutation(n, rng), 0.0};
    current.ei = score(current.perm);
    note_seen(current);
    for (int step = 0; step < cfg.max_steps; ++step) {
      std::optional<detail::Scored> best_neighbor;
      for (auto& nb : swap_neighbors(current.perm)) {
        detail::Scored s{std::move(nb), 0.0};
        s.ei = score(s.perm);
        note_seen(s);
        if (!best_neighbor || detail::better(s, *best_neighbor)) best_neighbor = std::move(s);
      }
      if (!best_neighbor || !(best_neighbor->ei > current.ei)) break;
      current = std::move(*best_neighbor);
    }
    if (!evaluated.contains(current.perm) && (!best_endpoint || detail::better(current, *best_endpoint)))
      best_endpoint = current;
  }

  if (best_endpoint) return best_endpoint->perm;
  if (best_seen) return best_seen->perm;
  return detail::random_unevaluated(n, evaluated, rng);
}

}  // namespace permbo
