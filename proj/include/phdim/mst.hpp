#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/estimate.hpp"
#include "phdim/filtration.hpp"
#include "phdim/generators.hpp"
#include "phdim/metric.hpp"
#include "phdim/persistence.hpp"
#include "phdim/union_find.hpp"

namespace phdim {

struct TreeEdge {
  Index a = 0, b = 0;
  double length = 0.0;
};

struct SpanningTree {
  std::vector<TreeEdge> edges;
  std::size_t num_points = 0;

  double total_length() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.length;
    return s;
  }
  std::vector<double> lengths() const {
    std::vector<double> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.push_back(e.length);
    return out;
  }
};

namespace detail {

inline SpanningTree kruskal(std::size_t n, std::vector<TreeEdge> edges) {
  std::sort(edges.begin(), edges.end(), [](const TreeEdge& x, const TreeEdge& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });
  SpanningTree tree;
  tree.num_points = n;
  tree.edges.reserve(n ? n - 1 : 0);
  UnionFind uf(n);
  for (const auto& e : edges) {
    if (uf.unite(e.a, e.b)) {
      tree.edges.push_back(e);
      if (tree.edges.size() + 1 == n) break;
    }
  }
  return tree;
}

}  // namespace detail

// Kruskal over all pairs; ties broken by (length, lower index, upper index).
inline SpanningTree minimum_spanning_tree(const FiniteMetricSpace& fms) {
  const std::size_t n = fms.size();
  std::vector<TreeEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) edges.push_back({a, b, fms(a, b)});
  }
  return detail::kruskal(n, std::move(edges));
}

// Same tree for the Euclidean metric, without materialising the matrix.
inline SpanningTree minimum_spanning_tree(const PointCloud& pc) {
  const std::size_t n = pc.size();
  std::vector<TreeEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      edges.push_back({a, b, euclidean_distance(pc.point(a), pc.point(b))});
    }
  }
  return detail::kruskal(n, std::move(edges));
}

// E^0_alpha = 1/2 sum_e |e|^alpha, with the 1/2 factor kept as defined.
inline double e_alpha_mst(const SpanningTree& t, double alpha) {
  double s = 0.0;
  for (const auto& e : t.edges) s += std::pow(e.length, alpha);
  return 0.5 * s;
}

// Raw sum without the 1/2 factor; equals E^0_alpha of the Rips barcode and
// 2^alpha times E^0_alpha of the Cech barcode.
inline double mst_power_sum(const SpanningTree& t, double alpha) { return 2.0 * e_alpha_mst(t, alpha); }

struct CorrespondenceReport {
  bool passed = true;
  std::size_t mst_edges = 0;
  std::size_t ph0_intervals = 0;
  double max_error = 0.0;
  std::vector<std::string> mismatches;
};

// Sorted bounded reduced PH_0 lengths versus sorted MST edge lengths (Rips)
// or half-lengths (Cech). Only degree 0 is needed, so the filtration is
// built up to edges.
inline CorrespondenceReport verify_mst_ph0_correspondence(const PointCloud& pc, ComplexKind kind,
                                                          double tol = kTolerance) {
  require(kind == ComplexKind::kRips || kind == ComplexKind::kCech,
          "verify_mst_ph0_correspondence: complex must be rips or cech");
  const SpanningTree tree = minimum_spanning_tree(pc);
  FiltrationParams fp;
  fp.max_dim = 1;
  const Filtration f = kind == ComplexKind::kRips ? rips_filtration(distance_matrix(pc), fp)
                                                  : cech_filtration(pc, fp);
  PersistenceParams pp;
  pp.keep_ephemeral = true;  // zero-length edges would otherwise be dropped
  const Barcode bc = persistent_homology(f, pp);
  std::vector<double> ph = bc.finite_lengths(0);
  std::vector<double> expected = tree.lengths();
  if (kind == ComplexKind::kCech) {
    for (double& v : expected) v /= 2.0;
  }
  std::sort(ph.begin(), ph.end());
  std::sort(expected.begin(), expected.end());
  CorrespondenceReport report;
  report.mst_edges = expected.size();
  report.ph0_intervals = ph.size();
  if (ph.size() != expected.size()) {
    report.passed = false;
    report.mismatches.push_back("interval count " + std::to_string(ph.size()) + " != edge count " +
                                std::to_string(expected.size()));
    return report;
  }
  for (std::size_t i = 0; i < ph.size(); ++i) {
    const double err = std::abs(ph[i] - expected[i]);
    report.max_error = std::max(report.max_error, err);
    if (err > tol) {
      report.passed = false;
      report.mismatches.push_back("rank " + std::to_string(i) + ": PH_0 length " + format_double(ph[i]) +
                                  " vs edge " + format_double(expected[i]));
    }
  }
  return report;
}

inline const std::vector<double>& default_alpha_grid() {
  static const std::vector<double> grid{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75};
  return grid;
}

namespace detail {

inline void check_sizes(const std::vector<std::size_t>& sizes) {
  require(sizes.size() >= 4, "dimension estimate: at least 4 sizes are required");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    require(sizes[i] > sizes[i - 1], "dimension estimate: sizes must be increasing");
  }
  if (sizes.front() == sizes.back()) throw DegenerateInput("dimension estimate: fewer than 2 distinct sizes");
}

}  // namespace detail

// MST dimension proxy: E^0_alpha of samples x_n from the family at each
// size, fitted in log-log against n and inverted as alpha / (1 - beta).
inline DimensionEstimate estimate_mst_dimension(const GeneratorSpec& spec, const std::vector<std::size_t>& sizes,
                                                const std::vector<double>& alpha_grid = default_alpha_grid()) {
  detail::check_sizes(sizes);
  require(!alpha_grid.empty(), "estimate_mst_dimension: empty alpha grid");
  std::vector<std::vector<double>> values(alpha_grid.size(), std::vector<double>(sizes.size(), 0.0));
  std::vector<double> size_values;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    GeneratorSpec at = spec;
    at.n = sizes[s];
    const SpanningTree tree = minimum_spanning_tree(generate_cloud(at));
    for (std::size_t a = 0; a < alpha_grid.size(); ++a) values[a][s] = e_alpha_mst(tree, alpha_grid[a]);
    size_values.push_back(static_cast<double>(sizes[s]));
  }
  return invert_power_law(size_values, alpha_grid, values, DimensionMethod::kMst, 0);
}

}  // namespace phdim
