#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/metric.hpp"
#include "phdim/random.hpp"

namespace phdim {

enum class Family {
  kSierpinski,
  kCantorInterval,
  kArcs,
  kUniformCube,
  kSegment,
  kLatticeSubset,
  kBipartite,
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::kSierpinski: return "sierpinski";
    case Family::kCantorInterval: return "cantor_interval";
    case Family::kArcs: return "arcs";
    case Family::kUniformCube: return "uniform_cube";
    case Family::kSegment: return "segment";
    case Family::kLatticeSubset: return "lattice_subset";
    case Family::kBipartite: return "bipartite";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::kSierpinski, Family::kCantorInterval, Family::kArcs,
                   Family::kUniformCube, Family::kSegment, Family::kLatticeSubset,
                   Family::kBipartite}) {
    if (family_name(f) == name) return f;
  }
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

inline constexpr int kChaosGameBurnIn = 100;
inline constexpr int kMaxBipartiteLevel = 12;
inline constexpr std::size_t kMaxBipartiteUnionPoints = 4096;

// Chaos game on the triangle (0,0), (1,0), (1/2, sqrt(3)/2).
inline PointCloud gen_sierpinski(std::size_t n, std::uint64_t seed) {
  require(n >= 1, "gen_sierpinski: n must be >= 1");
  const double vx[3] = {0.0, 1.0, 0.5};
  const double vy[3] = {0.0, 0.0, std::numbers::sqrt3 / 2.0};
  SplitMix64 rng(seed);
  double x = 0.0, y = 0.0;
  std::vector<double> coords;
  coords.reserve(2 * n);
  for (std::size_t step = 0; step < n + kChaosGameBurnIn; ++step) {
    const auto v = rng.uniform_index(3);
    x = 0.5 * (x + vx[v]);
    y = 0.5 * (y + vy[v]);
    if (step >= static_cast<std::size_t>(kChaosGameBurnIn)) {
      coords.push_back(x);
      coords.push_back(y);
    }
  }
  return PointCloud(2, std::move(coords));
}

// x uniform on the level-`levels` middle-thirds Cantor approximation,
// y uniform on [0, 1].
inline PointCloud gen_cantor_interval(std::size_t n, int levels, std::uint64_t seed) {
  require(n >= 1, "gen_cantor_interval: n must be >= 1");
  require(levels >= 1 && levels <= 30, "gen_cantor_interval: levels must be in [1, 30]");
  SplitMix64 rng(seed);
  std::vector<double> coords;
  coords.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    double scale = 1.0;
    for (int l = 0; l < levels; ++l) {
      scale /= 3.0;
      if (rng.next() >> 63) x += 2.0 * scale;
    }
    x += scale * rng.uniform01();
    coords.push_back(x);
    coords.push_back(rng.uniform01());
  }
  return PointCloud(2, std::move(coords));
}

// Two opposing unit-circle arcs in R^3, floor(n/2) evenly spaced angles on
// [-pi/8, pi/8] per arc (endpoints included).
inline PointCloud gen_arcs(std::size_t n) {
  require(n >= 2, "gen_arcs: n must be >= 2");
  const std::size_t per_arc = n / 2;
  const double half = std::numbers::pi / 8.0;
  std::vector<double> thetas(per_arc, 0.0);
  if (per_arc > 1) {
    for (std::size_t k = 0; k < per_arc; ++k) {
      thetas[k] = -half + 2.0 * half * static_cast<double>(k) /
                              static_cast<double>(per_arc - 1);
    }
  }
  std::vector<double> coords;
  coords.reserve(3 * 2 * per_arc);
  for (double t : thetas) {
    coords.insert(coords.end(), {std::cos(t), std::sin(t), 0.0});
  }
  for (double t : thetas) {
    coords.insert(coords.end(), {1.0 - std::cos(t), 0.0, std::sin(t)});
  }
  return PointCloud(3, std::move(coords));
}

inline PointCloud gen_uniform_cube(std::size_t n, std::size_t m, std::uint64_t seed) {
  require(n >= 1 && m >= 1, "gen_uniform_cube: n and m must be >= 1");
  SplitMix64 rng(seed);
  std::vector<double> coords(n * m);
  for (double& c : coords) c = rng.uniform01();
  return PointCloud(m, std::move(coords));
}

// n evenly spaced points on [0,1] x {0}.
inline PointCloud gen_segment(std::size_t n) {
  require(n >= 1, "gen_segment: n must be >= 1");
  std::vector<double> coords;
  coords.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x =
        n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    coords.push_back(x);
    coords.push_back(0.0);
  }
  return PointCloud(2, std::move(coords));
}

// Each point of {1..N}^m kept independently with probability `density`,
// enumerated in lexicographic order. Throws if nothing survives.
inline PointCloud gen_lattice_subset(std::size_t width, std::size_t m, double density,
                                     std::uint64_t seed) {
  require(width >= 1 && m >= 1, "gen_lattice_subset: N and m must be >= 1");
  require(density > 0.0 && density <= 1.0, "gen_lattice_subset: density must be in (0, 1]");
  SplitMix64 rng(seed);
  std::size_t total = 1;
  for (std::size_t k = 0; k < m; ++k) {
    total *= width;
    if (total > (std::size_t{1} << 26)) throw BudgetExceeded("gen_lattice_subset: lattice too large");
  }
  std::vector<double> coords;
  std::vector<double> point(m);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t k = m; k-- > 0;) {
      point[k] = static_cast<double>(rest % width + 1);
      rest /= width;
    }
    if (density >= 1.0 || rng.bernoulli(density)) {
      coords.insert(coords.end(), point.begin(), point.end());
    }
  }
  if (coords.empty()) throw DegenerateInput("gen_lattice_subset: no lattice point selected");
  return PointCloud(m, std::move(coords));
}

// Level-n bipartite space: 2^n points x_i then 2^n points y_j with
// d(x_i, y_j) = 2^{-n-1} for every pair and 2^{-n} within a side.
inline FiniteMetricSpace gen_bipartite_space(int level) {
  require(level >= 0, "gen_bipartite_space: level must be >= 0");
  require(level <= kMaxBipartiteLevel, "gen_bipartite_space: level must be <= 12");
  const std::size_t side = std::size_t{1} << level;
  const std::size_t n = 2 * side;
  const double cross = std::ldexp(1.0, -level - 1);
  const double within = std::ldexp(1.0, -level);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      d[j * n + k] = ((j < side) == (k < side)) ? within : cross;
    }
  }
  FiniteMetricSpace fms(n, std::move(d));
  fms.set_validated(true);
  return fms;
}

// Disjoint union of levels 0..max_level; points of levels i != j are at
// distance 2^{-min(i,j)}.
inline FiniteMetricSpace gen_bipartite_union(int max_level) {
  require(max_level >= 0, "gen_bipartite_union: max_level must be >= 0");
  std::size_t total = 0;
  std::vector<int> level_of;
  for (int l = 0; l <= max_level; ++l) {
    if (l > 30) throw BudgetExceeded("gen_bipartite_union: too many points");
    const std::size_t count = std::size_t{2} << l;
    total += count;
    if (total > kMaxBipartiteUnionPoints) {
      throw BudgetExceeded("gen_bipartite_union: more than 4096 points");
    }
    level_of.insert(level_of.end(), count, l);
  }
  std::vector<std::size_t> offset(max_level + 2, 0);
  for (int l = 0; l <= max_level; ++l) offset[l + 1] = offset[l] + (std::size_t{2} << l);
  std::vector<double> d(total * total, 0.0);
  for (std::size_t j = 0; j < total; ++j) {
    for (std::size_t k = 0; k < total; ++k) {
      if (j == k) continue;
      const int lj = level_of[j], lk = level_of[k];
      if (lj != lk) {
        d[j * total + k] = std::ldexp(1.0, -std::min(lj, lk));
        continue;
      }
      const std::size_t side = std::size_t{1} << lj;
      const bool same_side = ((j - offset[lj]) < side) == ((k - offset[lk]) < side);
      d[j * total + k] = std::ldexp(1.0, same_side ? -lj : -lj - 1);
    }
  }
  FiniteMetricSpace fms(total, std::move(d));
  fms.set_validated(true);
  return fms;
}

struct GeneratorSpec {
  Family family = Family::kSierpinski;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::size_t m = 2;             // uniform_cube / lattice_subset ambient dimension
  int levels = 12;               // cantor_interval depth
  std::size_t lattice_width = 4; // lattice_subset N
  double density = 1.0;          // lattice_subset inclusion probability
  int level = 1;                 // bipartite level

  bool operator==(const GeneratorSpec&) const = default;
};

// Point-cloud families. The sample size comes from `n` (sizes in estimators
// override it). Sierpinski and uniform samples with a common seed are
// nested: the first k points do not depend on n.
inline PointCloud generate_cloud(const GeneratorSpec& spec) {
  switch (spec.family) {
    case Family::kSierpinski: return gen_sierpinski(spec.n, spec.seed);
    case Family::kCantorInterval: return gen_cantor_interval(spec.n, spec.levels, spec.seed);
    case Family::kArcs: return gen_arcs(spec.n);
    case Family::kUniformCube: return gen_uniform_cube(spec.n, spec.m, spec.seed);
    case Family::kSegment: return gen_segment(spec.n);
    case Family::kLatticeSubset:
      return gen_lattice_subset(spec.lattice_width, spec.m, spec.density, spec.seed);
    case Family::kBipartite: break;
  }
  throw InvalidArgument("generate_cloud: family '" + std::string(family_name(spec.family)) +
                        "' is a metric space, not a point cloud");
}

inline FiniteMetricSpace generate_metric(const GeneratorSpec& spec) {
  if (spec.family == Family::kBipartite) return gen_bipartite_space(spec.level);
  return distance_matrix(generate_cloud(spec));
}

}  // namespace phdim
