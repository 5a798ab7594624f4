#pragma once

// Benchmark objectives over permutations: quadratic assignment, symmetric
// TSP, shelf-packed floor planning and single-row cell placement. All are
// minimized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "permbo/error.hpp"
#include "permbo/permutation.hpp"

namespace permbo {

using Matrix = std::vector<std::vector<double>>;

inline void check_square(const Matrix& m, std::size_t n, const char* what) {
  if (m.size() != n)
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " has " + std::to_string(m.size()) + " rows, expected " + std::to_string(n));
  for (const auto& row : m)
    if (row.size() != n)
      throw Error(ErrorKind::DimensionMismatch,
                  std::string(what) + " row of length " + std::to_string(row.size()) + ", expected " +
                      std::to_string(n));
}

// ---------------------------------------------------------------------------
// QAP

struct QapInstance {
  std::size_t n = 0;
  Matrix a;  // flows between facilities
  Matrix b;  // distances between locations
  std::optional<double> declared_optimum;

  void validate() const {
    if (n == 0) throw Error(ErrorKind::Empty, "QAP instance of size 0");
    check_square(a, n, "QAP matrix A");
    check_square(b, n, "QAP matrix B");
  }
};

/// sum_{i,j} A[i][j] * B[pi[i]][pi[j]], i.e. Tr(A P B P^T).
inline double qap_cost(const QapInstance& inst, const Permutation& pi) {
  require_same_length(inst.n, pi.size(), "qap_cost");
  double cost = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    const auto& arow = inst.a[i];
    const auto& brow = inst.b[pi[i]];
    for (std::size_t j = 0; j < inst.n; ++j) cost += arow[j] * brow[pi[j]];
  }
  return cost;
}

// ---------------------------------------------------------------------------
// TSP

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// TSPLIB EUC_2D: Euclidean distance rounded to the nearest integer.
inline double euc_2d(const Point2& p, const Point2& q) {
  const double dx = p.x - q.x, dy = p.y - q.y;
  return std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
}

struct TspInstance {
  std::size_t n = 0;
  std::vector<Point2> coords;  // empty for explicit instances
  Matrix dist;
  std::optional<double> declared_optimum;

  static TspInstance from_coords(std::vector<Point2> pts) {
    TspInstance t;
    t.n = pts.size();
    if (t.n == 0) throw Error(ErrorKind::Empty, "TSP instance of size 0");
    t.dist.assign(t.n, std::vector<double>(t.n, 0.0));
    for (std::size_t i = 0; i < t.n; ++i)
      for (std::size_t j = 0; j < t.n; ++j) t.dist[i][j] = euc_2d(pts[i], pts[j]);
    t.coords = std::move(pts);
    return t;
  }

  static TspInstance from_matrix(Matrix d) {
    TspInstance t;
    t.n = d.size();
    if (t.n == 0) throw Error(ErrorKind::Empty, "TSP instance of size 0");
    check_square(d, t.n, "TSP distance matrix");
    for (std::size_t i = 0; i < t.n; ++i) {
      if (d[i][i] != 0.0)
        throw Error(ErrorKind::InvalidArgument, "TSP distance diagonal must be zero at " + std::to_string(i));
      for (std::size_t j = 0; j < i; ++j)
        if (d[i][j] != d[j][i])
          throw Error(ErrorKind::InvalidArgument,
                      "TSP distance matrix asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    t.dist = std::move(d);
    return t;
  }
};

/// Closed tour length visiting cities in the order pi.
inline double tsp_cost(const TspInstance& inst, const Permutation& pi) {
  require_same_length(inst.n, pi.size(), "tsp_cost");
  double cost = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i) cost += inst.dist[pi[i]][pi[(i + 1) % inst.n]];
  return cost;
}

// ---------------------------------------------------------------------------
// Cell placement

struct NetList {
  std::size_t cells = 0;
  std::vector<std::vector<int>> nets;

  NetList() = default;
  NetList(std::size_t cell_count, std::vector<std::vector<int>> net_cells)
      : cells(cell_count), nets(std::move(net_cells)) {
    if (cells == 0) throw Error(ErrorKind::Empty, "net list with no cells");
    for (std::size_t k = 0; k < nets.size(); ++k) {
      if (nets[k].size() < 2)
        throw Error(ErrorKind::InvalidArgument, "net " + std::to_string(k) + " has fewer than 2 cells");
      for (int c : nets[k])
        if (c < 0 || static_cast<std::size_t>(c) >= cells)
          throw Error(ErrorKind::IndexOutOfRange,
                      "net " + std::to_string(k) + " references cell " + std::to_string(c));
    }
  }
};

/// Cells occupy slots 0..n-1 in the order pi (pi[slot] = cell); each net
/// costs the span between its leftmost and rightmost cell.
inline double cell_placement_cost(const NetList& nets, const Permutation& pi) {
  if (pi.size() != nets.cells)
    throw Error(ErrorKind::IndexOutOfRange, "permutation of length " + std::to_string(pi.size()) + " for " +
                                                std::to_string(nets.cells) + " cells");
  const auto slot = inverse(pi);
  double total = 0.0;
  for (const auto& net : nets.nets) {
    int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
    for (int c : net) {
      lo = std::min(lo, slot[c]);
      hi = std::max(hi, slot[c]);
    }
    total += hi - lo;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Floor planning

struct Block {
  double width = 0.0;
  double height = 0.0;
};

struct FloorplanInstance {
  std::vector<Block> blocks;
  double strip_width = 0.0;

  void validate() const;
};

inline void check_blocks(std::span<const Block> blocks, double strip_width) {
  if (blocks.empty()) throw Error(ErrorKind::Empty, "floorplan with no blocks");
  if (!(strip_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "strip width must be > 0");
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (!(blocks[k].width > 0.0) || !(blocks[k].height > 0.0))
      throw Error(ErrorKind::InvalidArgument, "block " + std::to_string(k) + " has nonpositive size");
    if (blocks[k].width > strip_width)
      throw Error(ErrorKind::BlockTooWide, "block " + std::to_string(k) + " width " +
                                               std::to_string(blocks[k].width) + " exceeds strip width " +
                                               std::to_string(strip_width));
  }
}

inline void FloorplanInstance::validate() const { check_blocks(blocks, strip_width); }

/// Level packing: blocks are placed left to right in the order pi on the
/// current shelf; a block that does not fit opens a new shelf above. Cost is
/// the summed height of all shelves.
inline double floorplan_cost(std::span<const Block> blocks, double strip_width, const Permutation& pi) {
  require_same_length(blocks.size(), pi.size(), "floorplan_cost");
  check_blocks(blocks, strip_width);
  double total = 0.0, used = 0.0, shelf = 0.0;
  for (int idx : pi) {
    const Block& b = blocks[idx];
    if (used + b.width > strip_width) {
      total += shelf;
      used = 0.0;
      shelf = 0.0;
    }
    used += b.width;
    shelf = std::max(shelf, b.height);
  }
  return total + shelf;
}

inline double floorplan_cost(const FloorplanInstance& inst, const Permutation& pi) {
  return floorplan_cost(inst.blocks, inst.strip_width, pi);
}

// ---------------------------------------------------------------------------
// Seeded synthetic instances. These are stand-ins; the published benchmark
// instances for floor planning and cell placement are not available.

inline QapInstance generate_qap(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  QapInstance q;
  q.n = n;
  q.a.assign(n, std::vector<double>(n, 0.0));
  q.b.assign(n, std::vector<double>(n, 0.0));
  std::vector<Point2> sites(n);
  for (auto& s : sites) {
    s.x = static_cast<double>(uniform_below(rng, 10));
    s.y = static_cast<double>(uniform_below(rng, 10));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double flow = static_cast<double>(uniform_below(rng, 10));
      q.a[i][j] = q.a[j][i] = flow;
      q.b[i][j] = q.b[j][i] = std::abs(sites[i].x - sites[j].x) + std::abs(sites[i].y - sites[j].y);
    }
  }
  return q;
}

inline TspInstance generate_tsp(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> pts(n);
  for (auto& p : pts) {
    p.x = static_cast<double>(uniform_below(rng, 1000));
    p.y = static_cast<double>(uniform_below(rng, 1000));
  }
  return TspInstance::from_coords(std::move(pts));
}

/// `net_count` nets of 2 to 4 distinct cells.
inline NetList generate_netlist(std::size_t cells, std::size_t net_count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> nets;
  for (std::size_t k = 0; k < net_count; ++k) {
    const auto size = std::min<std::size_t>(cells, 2 + uniform_below(rng, 3));
    const auto order = random_permutation(cells, rng);
    nets.emplace_back(order.begin(), order.begin() + static_cast<long>(size));
    std::sort(nets.back().begin(), nets.back().end());
  }
  return NetList(cells, std::move(nets));
}

/// Integer-sized blocks in [1, 5] x [1, 5] on a strip of width 10.
inline FloorplanInstance generate_floorplan(std::size_t blocks, std::uint64_t seed) {
  Rng rng(seed);
  FloorplanInstance f;
  f.strip_width = 10.0;
  for (std::size_t k = 0; k < blocks; ++k)
    f.blocks.push_back({static_cast<double>(1 + uniform_below(rng, 5)), static_cast<double>(1 + uniform_below(rng, 5))});
  return f;
}

// ---------------------------------------------------------------------------

struct Objective {
  std::string name;
  std::size_t n = 0;
  std::function<double(const Permutation&)> eval;
  std::optional<double> known_optimum;

  double operator()(const Permutation& pi) const { return eval(pi); }
};

inline Objective make_objective(std::string name, QapInstance inst) {
  inst.validate();
  const auto n = inst.n;
  auto opt = inst.declared_optimum;
  return {std::move(name), n, [q = std::move(inst)](const Permutation& p) { return qap_cost(q, p); }, opt};
}

inline Objective make_objective(std::string name, TspInstance inst) {
  const auto n = inst.n;
  auto opt = inst.declared_optimum;
  return {std::move(name), n, [t = std::move(inst)](const Permutation& p) { return tsp_cost(t, p); }, opt};
}

inline Objective make_objective(std::string name, NetList nets) {
  const auto n = nets.cells;
  return {std::move(name), n, [c = std::move(nets)](const Permutation& p) { return cell_placement_cost(c, p); }, {}};
}

inline Objective make_objective(std::string name, FloorplanInstance inst) {
  inst.validate();
  const auto n = inst.blocks.size();
  return {std::move(name), n, [f = std::move(inst)](const Permutation& p) { return floorplan_cost(f, p); }, {}};
}

inline constexpr std::size_t kMaxBruteForceSize = 10;

/// Exhaustive minimum; ties resolve to the lexicographically smallest permutation.
inline std::pair<Permutation, double> brute_force_optimum(const Objective& obj) {
  if (obj.n > kMaxBruteForceSize)
    throw Error(ErrorKind::TooLarge, "brute force limited to n <= " + std::to_string(kMaxBruteForceSize) +
                                         ", got " + std::to_string(obj.n));
  if (obj.n == 0) throw Error(ErrorKind::Empty, "objective of size 0");
  std::optional<Permutation> best;
  double best_value = std::numeric_limits<double>::infinity();
  for_each_permutation(obj.n, [&](const Permutation& p) {
    const double v = obj(p);
    if (!best || v < best_value) {
      best = p;
      best_value = v;
    }
  });
  return {*best, best_value};
}

}  // namespace permbo
