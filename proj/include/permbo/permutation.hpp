#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "permbo/error.hpp"

namespace permbo {

/// Seeded generator used by every stochastic operation. Never global.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). Rejection sampling on the raw 64-bit
/// stream so results do not depend on the standard library's distributions.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform real in [0, 1) with 53 bits of precision.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// A bijection on {0, ..., n-1}, stored as the image sequence.
class Permutation {
 public:
  using value_type = int;

  /// Validating constructor; throws Empty, OutOfRange or DuplicateElement.
  explicit Permutation(std::vector<int> elems) : elems_(std::move(elems)) { check(); }
  Permutation(std::initializer_list<int> elems) : elems_(elems) { check(); }

  static Permutation identity(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::Empty, "identity of size 0");
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return Permutation(std::move(v), Unchecked{});
  }

  std::size_t size() const noexcept { return elems_.size(); }
  int operator[](std::size_t i) const { return elems_[i]; }
  std::span<const int> elems() const noexcept { return elems_; }
  const std::vector<int>& vec() const noexcept { return elems_; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }

  /// Lexicographic order on the image sequence.
  friend auto operator<=>(const Permutation&, const Permutation&) = default;
  friend bool operator==(const Permutation&, const Permutation&) = default;

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(elems_[i]);
    }
    return s + "]";
  }

  friend std::ostream& operator<<(std::ostream& os, const Permutation& p) { return os << p.to_string(); }

 private:
  struct Unchecked {};
  Permutation(std::vector<int> elems, Unchecked) : elems_(std::move(elems)) {}

  void check() const {
    if (elems_.empty()) throw Error(ErrorKind::Empty, "permutation must have at least one element");
    const auto n = elems_.size();
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const int v = elems_[i];
      if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw Error(ErrorKind::OutOfRange, "value " + std::to_string(v) + " at position " +
                                               std::to_string(i) + " outside [0," + std::to_string(n) + ")");
      if (seen[v]) throw Error(ErrorKind::DuplicateElement, "value " + std::to_string(v) + " repeated");
      seen[v] = true;
    }
  }

  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation inverse(const Permutation&);
  friend Permutation rotate(const Permutation&, long long);
  friend Permutation random_permutation(std::size_t, Rng&);
  friend std::vector<Permutation> swap_neighbors(const Permutation&);

  std::vector<int> elems_;
};

/// Validates an arbitrary integer sequence.
inline Permutation validate(std::vector<int> elems) { return Permutation(std::move(elems)); }

inline Permutation identity(std::size_t n) { return Permutation::identity(n); }

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw Error(ErrorKind::LengthMismatch,
                std::string(what) + ": lengths " + std::to_string(a) + " and " + std::to_string(b));
}

/// Right multiplication: result[i] = pi[sigma[i]].
inline Permutation compose(const Permutation& pi, const Permutation& sigma) {
  require_same_length(pi.size(), sigma.size(), "compose");
  std::vector<int> out(pi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pi[sigma[i]];
  return Permutation(std::move(out), Permutation::Unchecked{});
}

inline Permutation inverse(const Permutation& pi) {
  std::vector<int> out(pi.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[pi[i]] = static_cast<int>(i);
  return Permutation(std::move(out), Permutation::Unchecked{});
}

/// Cyclic shift: result[i] = pi[(i + k) mod n]; negative k shifts the other way.
inline Permutation rotate(const Permutation& pi, long long k) {
  const auto n = static_cast<long long>(pi.size());
  const long long shift = ((k % n) + n) % n;
  std::vector<int> out(pi.size());
  for (long long i = 0; i < n; ++i) out[i] = pi[(i + shift) % n];
  return Permutation(std::move(out), Permutation::Unchecked{});
}

/// All single transpositions of positions (i < j), in lexicographic order of (i, j).
inline std::vector<Permutation> swap_neighbors(const Permutation& pi) {
  const auto n = pi.size();
  std::vector<Permutation> out;
  if (n < 2) return out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<int> v = pi.vec();
      std::swap(v[i], v[j]);
      out.push_back(Permutation(std::move(v), Permutation::Unchecked{}));
    }
  }
  return out;
}

/// Kendall-tau distance by definition, O(n^2). This is the reference.
inline long long kendall_tau(const Permutation& pi, const Permutation& sigma) {
  require_same_length(pi.size(), sigma.size(), "kendall_tau");
  const auto n = pi.size();
  long long d = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((pi[i] < pi[j]) != (sigma[i] < sigma[j])) ++d;
  return d;
}

namespace detail {

inline long long count_inversions(std::vector<int>& v, std::vector<int>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  long long inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      buf[k++] = v[i++];
    } else {
      inv += static_cast<long long>(mid - i);
      buf[k++] = v[j++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return inv;
}

}  // namespace detail

/// O(n log n) Kendall-tau: inversions of sigma read in the order that sorts pi.
inline long long kendall_tau_fast(const Permutation& pi, const Permutation& sigma) {
  require_same_length(pi.size(), sigma.size(), "kendall_tau_fast");
  const auto pos = inverse(pi);
  std::vector<int> seq(pi.size());
  for (std::size_t k = 0; k < seq.size(); ++k) seq[k] = sigma[pos[k]];
  std::vector<int> buf(seq.size());
  return detail::count_inversions(seq, buf, 0, seq.size());
}

/// Fisher-Yates shuffle of the identity.
inline Permutation random_permutation(std::size_t n, Rng& rng) {
  if (n == 0) throw Error(ErrorKind::Empty, "random_permutation of size 0");
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i + 1));
    std::swap(v[i], v[j]);
  }
  return Permutation(std::move(v), Permutation::Unchecked{});
}

/// n! as a double, exact for n <= 18; +inf past double range.
inline double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
  return f;
}

/// Visits every permutation of size n in lexicographic order.
template <typename Fn>
void for_each_permutation(std::size_t n, Fn&& fn) {
  std::vector<int> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
  do {
    fn(Permutation(v));
  } while (std::next_permutation(v.begin(), v.end()));
}

}  // namespace permbo
