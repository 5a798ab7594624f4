#pragma once

// Feature maps from permutations to fixed-length real vectors.
//
// Comparison maps emit -1 when a compared pair is in ascending order and +1
// otherwise. Histogram maps emit nonnegative integer counts. All maps return
// std::vector<double> so blocks concatenate into one vector for the RBF kernel.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "permbo/error.hpp"
#include "permbo/permutation.hpp"

namespace permbo {

using FeatureVector = std::vector<double>;

inline constexpr int kMaxWindowLength = 6;

struct FeaturizerConfig {
  int window_length = 4;
  int max_shift = 5;
  bool enable_mid = true;
  bool enable_slide = true;
  bool enable_shift = true;

  void validate() const {
    if (window_length < 2 || window_length > kMaxWindowLength)
      throw Error(ErrorKind::InvalidArgument,
                  "window length must be in [2," + std::to_string(kMaxWindowLength) + "], got " +
                      std::to_string(window_length));
    if (max_shift < 1) throw Error(ErrorKind::InvalidArgument, "max shift must be >= 1");
  }

  friend bool operator==(const FeaturizerConfig&, const FeaturizerConfig&) = default;
};

enum class MapKind { Enum, Merge, Mid, Slide, Shift, Concat };

// ---------------------------------------------------------------------------
// Enumeration-sort map: every position pair i < j.

inline FeatureVector phi_enum(const Permutation& pi) {
  const auto n = pi.size();
  FeatureVector out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(pi[i] < pi[j] ? -1.0 : 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Merge-sort map.

/// Length of the padded merge trace: L(1) = 0, L(n) = L(floor(n/2)) + L(ceil(n/2)) + n - 1.
constexpr std::size_t merge_length_recurrence(std::size_t n) {
  if (n <= 1) return 0;
  return merge_length_recurrence(n / 2) + merge_length_recurrence(n - n / 2) + n - 1;
}

/// Closed form n*ceil(log2 n) - 2^ceil(log2 n) + 1.
constexpr std::size_t merge_length(std::size_t n) {
  if (n <= 1) return 0;
  std::size_t c = 0;
  std::size_t p = 1;
  while (p < n) {
    p <<= 1;
    ++c;
  }
  return n * c - p + 1;
}

namespace detail {

// Sorts v[lo, hi) in place and appends the comparison trace in the order
// left trace, right trace, merge trace. Each merge of sizes a and b emits
// exactly a + b - 1 signs: after one side runs out it behaves as +infinity.
inline void merge_trace(std::vector<int>& v, std::vector<int>& buf, std::size_t lo, std::size_t hi,
                        FeatureVector& out) {
  const std::size_t n = hi - lo;
  if (n < 2) return;
  const std::size_t mid = lo + n / 2;
  merge_trace(v, buf, lo, mid, out);
  merge_trace(v, buf, mid, hi, out);

  std::size_t i = lo, j = mid, k = lo;
  for (std::size_t emitted = 0; emitted + 1 < n; ++emitted) {
    if (i == mid) {
      out.push_back(1.0);
      buf[k++] = v[j++];
    } else if (j == hi) {
      out.push_back(-1.0);
      buf[k++] = v[i++];
    } else if (v[i] > v[j]) {
      out.push_back(1.0);
      buf[k++] = v[j++];
    } else {
      out.push_back(-1.0);
      buf[k++] = v[i++];
    }
  }
  // The last element needs no comparison.
  buf[k] = (i < mid) ? v[i] : v[j];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
}

// Inverse of merge_trace on the relative order of a segment of length n.
inline std::vector<int> merge_replay(std::span<const double> bits, std::size_t& cursor, std::size_t n) {
  if (n == 1) return {0};
  const std::size_t a = n / 2, b = n - a;
  const auto left = merge_replay(bits, cursor, a);
  const auto right = merge_replay(bits, cursor, b);

  std::vector<int> left_slot(a), right_slot(b);
  std::size_t i = 0, j = 0;
  for (std::size_t t = 0; t < n; ++t) {
    bool take_right;
    if (t + 1 == n) {
      take_right = (i == a);
    } else {
      const double bit = bits[cursor++];
      if (bit != 1.0 && bit != -1.0)
        throw Error(ErrorKind::InvalidArgument, "merge trace entries must be +1 or -1");
      if (i == a && bit != 1.0)
        throw Error(ErrorKind::InvalidArgument, "merge trace inconsistent after left side exhausted");
      if (j == b && bit != -1.0)
        throw Error(ErrorKind::InvalidArgument, "merge trace inconsistent after right side exhausted");
      take_right = bit == 1.0;
    }
    if (take_right)
      right_slot[j++] = static_cast<int>(t);
    else
      left_slot[i++] = static_cast<int>(t);
  }

  std::vector<int> ranks(n);
  for (std::size_t p = 0; p < a; ++p) ranks[p] = left_slot[left[p]];
  for (std::size_t p = 0; p < b; ++p) ranks[a + p] = right_slot[right[p]];
  return ranks;
}

}  // namespace detail

/// Merge-sort comparison trace with mid = floor(n/2); length merge_length(n).
inline FeatureVector phi_merge(const Permutation& pi) {
  std::vector<int> v = pi.vec();
  std::vector<int> buf(v.size());
  FeatureVector out;
  out.reserve(merge_length(v.size()));
  detail::merge_trace(v, buf, 0, v.size(), out);
  return out;
}

/// Recovers the permutation from its merge trace by replaying the merges:
/// +1 takes from the right run, -1 from the left, forced takes after exhaustion.
inline Permutation merge_reconstruct(std::span<const double> trace, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::Empty, "cannot reconstruct a permutation of size 0");
  if (trace.size() != merge_length(n))
    throw Error(ErrorKind::LengthMismatch, "merge trace of length " + std::to_string(trace.size()) +
                                               " for n=" + std::to_string(n) + ", expected " +
                                               std::to_string(merge_length(n)));
  std::size_t cursor = 0;
  return Permutation(detail::merge_replay(trace, cursor, n));
}

// ---------------------------------------------------------------------------
// Descriptors.

/// Compares positions at equal offsets in the two halves: (i, i + ceil(n/2)).
inline FeatureVector phi_mid(const Permutation& pi) {
  const auto n = pi.size();
  const auto h = n - n / 2;
  FeatureVector out;
  out.reserve(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) out.push_back(pi[i] < pi[i + h] ? -1.0 : 1.0);
  return out;
}

/// p[i] = rank of v[i] among v, 0 for the smallest.
template <typename T>
std::vector<int> relative_order(std::span<const T> v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
  for (std::size_t r = 1; r < order.size(); ++r)
    if (!(v[order[r - 1]] < v[order[r]]))
      throw Error(ErrorKind::DuplicateValues, "relative order needs distinct entries");
  std::vector<int> p(v.size());
  for (std::size_t r = 0; r < order.size(); ++r) p[order[r]] = static_cast<int>(r);
  return p;
}

template <typename T>
std::vector<int> relative_order(const std::vector<T>& v) {
  return relative_order(std::span<const T>(v));
}

/// Lexicographic rank of a motif among all permutations of its length (Lehmer code).
inline std::size_t motif_rank(std::span<const int> motif) {
  const auto w = motif.size();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < w; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < w; ++j)
      if (motif[j] < motif[i]) ++smaller;
    rank = rank * (w - i) + smaller;
  }
  return rank;
}

inline std::size_t small_factorial(int w) {
  std::size_t f = 1;
  for (int k = 2; k <= w; ++k) f *= static_cast<std::size_t>(k);
  return f;
}

/// Histogram of relative-order motifs over the n circular windows of length w.
inline FeatureVector phi_slide(const Permutation& pi, int w) {
  const auto n = pi.size();
  if (w < 2) throw Error(ErrorKind::InvalidArgument, "window length must be >= 2");
  if (w > kMaxWindowLength)
    throw Error(ErrorKind::WindowTooLarge,
                "window length " + std::to_string(w) + " exceeds cap " + std::to_string(kMaxWindowLength));
  if (static_cast<std::size_t>(w) > n)
    throw Error(ErrorKind::WindowTooLarge,
                "window length " + std::to_string(w) + " exceeds permutation length " + std::to_string(n));
  FeatureVector hist(small_factorial(w), 0.0);
  std::vector<int> window(static_cast<std::size_t>(w));
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < w; ++j) window[j] = pi[(i + static_cast<std::size_t>(j)) % n];
    const auto motif = relative_order(std::span<const int>(window));
    hist[motif_rank(motif)] += 1.0;
  }
  return hist;
}

/// Histogram of displacements pos[i] - i, clipped to [-s_max, s_max].
inline FeatureVector phi_shift(const Permutation& pi, int s_max) {
  if (s_max < 1) throw Error(ErrorKind::InvalidArgument, "max shift must be >= 1");
  const auto pos = inverse(pi);
  FeatureVector hist(static_cast<std::size_t>(2 * s_max + 1), 0.0);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const int delta = std::clamp(pos[i] - static_cast<int>(i), -s_max, s_max);
    hist[static_cast<std::size_t>(delta + s_max)] += 1.0;
  }
  return hist;
}

/// Merge trace followed by the enabled descriptors, in the order mid, slide, shift.
inline FeatureVector phi_concat(const Permutation& pi, const FeaturizerConfig& cfg) {
  cfg.validate();
  FeatureVector out = phi_merge(pi);
  auto append = [&out](const FeatureVector& block) { out.insert(out.end(), block.begin(), block.end()); };
  if (cfg.enable_mid) append(phi_mid(pi));
  if (cfg.enable_slide) append(phi_slide(pi, cfg.window_length));
  if (cfg.enable_shift) append(phi_shift(pi, cfg.max_shift));
  return out;
}

inline std::size_t feature_length(std::size_t n, const FeaturizerConfig& cfg, MapKind kind) {
  switch (kind) {
    case MapKind::Enum: return n * (n - 1) / 2;
    case MapKind::Merge: return merge_length(n);
    case MapKind::Mid: return n / 2;
    case MapKind::Slide: return small_factorial(cfg.window_length);
    case MapKind::Shift: return static_cast<std::size_t>(2 * cfg.max_shift + 1);
    case MapKind::Concat:
      return merge_length(n) + (cfg.enable_mid ? n / 2 : 0) +
             (cfg.enable_slide ? small_factorial(cfg.window_length) : 0) +
             (cfg.enable_shift ? static_cast<std::size_t>(2 * cfg.max_shift + 1) : 0);
  }
  return 0;
}

// ---------------------------------------------------------------------------

enum class KernelKind { Merge, Mallows };

inline std::string_view to_string(KernelKind k) { return k == KernelKind::Merge ? "merge" : "mallows"; }

/// The embedding a surrogate uses: the concatenated merge map or the
/// enumeration map that underlies the Mallows kernel.
struct Featurizer {
  KernelKind kind = KernelKind::Merge;
  FeaturizerConfig config{};

  FeatureVector operator()(const Permutation& pi) const {
    return kind == KernelKind::Merge ? phi_concat(pi, config) : phi_enum(pi);
  }

  std::size_t length(std::size_t n) const {
    return feature_length(n, config, kind == KernelKind::Merge ? MapKind::Concat : MapKind::Enum);
  }
};

}  // namespace permbo
