#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/estimate.hpp"
#include "phdim/filtration.hpp"
#include "phdim/generators.hpp"
#include "phdim/metric.hpp"
#include "phdim/mst.hpp"
#include "phdim/persistence.hpp"
#include "phdim/regression.hpp"

namespace phdim {

// E^i_alpha: sum of (d - b)^alpha over the bounded degree-i intervals.
inline double e_alpha(const Barcode& b, int degree, double alpha) {
  double s = 0.0;
  for (const auto& iv : b.intervals()) {
    if (iv.degree == degree && iv.finite()) s += std::pow(iv.length(), alpha);
  }
  return s;
}

// |I_{i,eps}|: bounded degree-i intervals strictly longer than eps.
inline std::size_t interval_count_tail(const Barcode& b, int degree, double eps) {
  require(eps >= 0.0, "interval_count_tail: eps must be nonnegative");
  std::size_t count = 0;
  for (const auto& iv : b.intervals()) {
    if (iv.degree == degree && iv.finite() && iv.length() > eps) ++count;
  }
  return count;
}

// Occupied cells of the origin-anchored grid of half-open cubes
// [k delta, (k+1) delta).
inline std::size_t box_count_grid(const PointCloud& pc, double delta) {
  require(delta > 0.0, "box_count_grid: delta must be positive");
  struct CellHash {
    std::size_t operator()(const std::vector<std::int64_t>& cell) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ULL;
      for (auto c : cell) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ULL + (h >> 29);
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_set<std::vector<std::int64_t>, CellHash> cells;
  cells.reserve(pc.size());
  std::vector<std::int64_t> cell(pc.dim());
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (std::size_t k = 0; k < pc.dim(); ++k) {
      cell[k] = static_cast<std::int64_t>(std::floor(pc.coord(i, k) / delta));
    }
    cells.insert(cell);
  }
  return cells.size();
}

// Size of a greedy maximal packing by disjoint closed delta-balls.
inline std::size_t ball_packing_count(const FiniteMetricSpace& fms, double delta) {
  require(delta > 0.0, "ball_packing_count: delta must be positive");
  return epsilon_net(fms, 4.0 * delta).size();
}

inline std::size_t ball_packing_count(const PointCloud& pc, double delta) {
  require(delta > 0.0, "ball_packing_count: delta must be positive");
  return epsilon_net(pc, 4.0 * delta).size();
}

inline std::vector<double> dyadic_scales(int finest_exponent, int coarsest_exponent) {
  std::vector<double> out;
  for (int k = coarsest_exponent; k <= finest_exponent; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

// Least-squares slope of log N_delta against log(1/delta).
inline DimensionEstimate estimate_box_dimension(const PointCloud& pc, std::vector<double> deltas,
                                                bool use_packing = false) {
  require(deltas.size() >= 3, "estimate_box_dimension: at least 3 scales are required");
  for (double d : deltas) require(d > 0.0, "estimate_box_dimension: scales must be positive");
  std::sort(deltas.begin(), deltas.end());
  if (deltas.back() < 4.0 * deltas.front()) {
    throw DegenerateInput("estimate_box_dimension: scales must span at least two octaves");
  }
  std::vector<double> lx, ly;
  for (double d : deltas) {
    const std::size_t count = use_packing ? ball_packing_count(pc, d) : box_count_grid(pc, d);
    lx.push_back(std::log(1.0 / d));
    ly.push_back(std::log(static_cast<double>(count)));
  }
  const LinearFit fit = least_squares(lx, ly);
  DimensionEstimate est;
  est.method = DimensionMethod::kBox;
  est.estimate = std::max(0.0, fit.slope);
  est.slope = fit.slope;
  est.slope_stderr = fit.slope_stderr;
  est.window_lo = deltas.front();
  est.window_hi = deltas.back();
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    est.diagnostics.push_back({std::numeric_limits<double>::quiet_NaN(), deltas[i], std::exp(ly[i]),
                               std::exp(fit.intercept + fit.slope * lx[i])});
  }
  return est;
}

struct PhPipeline {
  ComplexKind kind = ComplexKind::kAlpha2d;
  std::size_t budget = kDefaultSimplexBudget;
};

// Barcode of a point cloud up to degree `degree` (the filtration includes
// simplices of dimension degree + 1).
inline Barcode point_cloud_barcode(const PointCloud& pc, int degree, const PhPipeline& pipeline = {},
                                   const PersistenceParams& pp = {}) {
  require(degree >= 0, "barcode: degree must be >= 0");
  FiltrationParams fp;
  fp.max_dim = degree + 1;
  fp.budget = pipeline.budget;
  switch (pipeline.kind) {
    case ComplexKind::kRips: return persistent_homology(rips_filtration(distance_matrix(pc), fp), pp);
    case ComplexKind::kCech: return persistent_homology(cech_filtration(pc, fp), pp);
    case ComplexKind::kAlpha2d:
      require(degree <= 1, "alpha2d barcodes are available for degrees 0 and 1");
      return persistent_homology(alpha_filtration_2d(pc), pp);
    case ComplexKind::kCustom: break;
  }
  throw InvalidArgument("barcode: complex kind must be rips, cech or alpha2d");
}

// alpha <= 1: the inversion's pre-asymptotic error decays like n^{-beta},
// so exponents close to the dimension (small beta) converge too slowly at
// the sample sizes used here.
inline const std::vector<double>& default_ph_alpha_grid() {
  static const std::vector<double> grid{0.25, 0.5, 0.75, 1.0};
  return grid;
}

// PH_i-dimension proxy: E^i_alpha of samples at each size, inverted as in
// estimate_mst_dimension. All-empty barcodes give 0 with the degenerate flag.
inline DimensionEstimate estimate_ph_dimension(const GeneratorSpec& spec, int degree, const PhPipeline& pipeline,
                                               const std::vector<std::size_t>& sizes,
                                               const std::vector<double>& alpha_grid = default_ph_alpha_grid()) {
  detail::check_sizes(sizes);
  require(!alpha_grid.empty(), "estimate_ph_dimension: empty alpha grid");
  std::vector<std::vector<double>> values(alpha_grid.size(), std::vector<double>(sizes.size(), 0.0));
  std::vector<double> size_values;
  bool any = false;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    GeneratorSpec at = spec;
    at.n = sizes[s];
    const Barcode bc = point_cloud_barcode(generate_cloud(at), degree, pipeline);
    any = any || !bc.finite_lengths(degree).empty();
    for (std::size_t a = 0; a < alpha_grid.size(); ++a) values[a][s] = e_alpha(bc, degree, alpha_grid[a]);
    size_values.push_back(static_cast<double>(sizes[s]));
  }
  if (!any) {
    DimensionEstimate est;
    est.method = DimensionMethod::kPh;
    est.degree = degree;
    est.estimate = 0.0;
    est.degenerate = true;
    est.window_lo = kBetaWindowLo;
    est.window_hi = kBetaWindowHi;
    est.note = "empty barcodes at all sizes";
    for (double n : size_values) est.diagnostics.push_back({alpha_grid.front(), n, 0.0, 0.0});
    return est;
  }
  return invert_power_law(size_values, alpha_grid, values, DimensionMethod::kPh, degree);
}

struct ArcsRow {
  std::size_t n = 0;       // requested size
  std::size_t points = 0;  // 2 * floor(n / 2)
  std::size_t count = 0;   // |PH_1|
  double e1 = 0.0;         // E^1_1
};

struct ArcsReport {
  std::vector<ArcsRow> rows;
  double count_slope = 0.0;
  double e1_ratio = 0.0;  // max / min of E^1_1 over the sizes
};

inline constexpr std::size_t kArcsMaxSize = 400;

// Cech PH_1 interval counts and E^1_1 of the two-arcs samples.
inline ArcsReport arcs_experiment(const std::vector<std::size_t>& sizes, std::size_t budget = kDefaultSimplexBudget) {
  require(sizes.size() >= 2, "arcs_experiment: at least two sizes are required");
  for (std::size_t n : sizes) {
    if (n > kArcsMaxSize) throw BudgetExceeded("arcs_experiment: sizes above 400 exceed the Cech 2-skeleton budget");
    require(n >= 2, "arcs_experiment: sizes must be >= 2");
  }
  ArcsReport report;
  std::vector<double> lx, ly;
  double e_min = kInfinity, e_max = 0.0;
  for (std::size_t n : sizes) {
    const PointCloud pc = gen_arcs(n);
    const Barcode bc = point_cloud_barcode(pc, 1, {ComplexKind::kCech, budget});
    ArcsRow row{n, pc.size(), bc.count(1), e_alpha(bc, 1, 1.0)};
    report.rows.push_back(row);
    if (row.count > 0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(static_cast<double>(row.count)));
    }
    e_min = std::min(e_min, row.e1);
    e_max = std::max(e_max, row.e1);
  }
  if (lx.size() >= 2) {
    try {
      report.count_slope = least_squares(lx, ly).slope;
    } catch (const DegenerateInput&) {
      report.count_slope = 0.0;
    }
  }
  report.e1_ratio = e_min > 0.0 ? e_max / e_min : kInfinity;
  return report;
}

struct TailExponents {
  double sum_exponent = 0.0;
  double count_exponent = 0.0;
  bool degenerate = false;
  std::vector<DiagnosticRow> diagnostics;  // (eps, F(eps), fitted F)
};

namespace detail {

inline double shell_growth_slope(const std::vector<double>& sorted_desc, const std::vector<int>& exps,
                                 double alpha) {
  // Increments of the partial sums over dyadic shells (2^{-j}, 2^{-j+1}].
  std::vector<double> lx, ly;
  for (int j : exps) {
    const double hi = std::ldexp(1.0, -j + 1), lo = std::ldexp(1.0, -j);
    double s = 0.0;
    for (double y : sorted_desc) {
      if (y > hi) continue;
      if (y <= lo) break;
      s += std::pow(y, alpha);
    }
    if (s > 0.0) {
      lx.push_back(static_cast<double>(j) * std::log(2.0));
      ly.push_back(std::log(s));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return least_squares(lx, ly).slope;
}

}  // namespace detail

inline constexpr std::size_t kTailMinLengths = 10;

// Tail exponents of a multiset of positive lengths. The count exponent is
// the log-log slope of F(eps) = |{y > eps}| against 1/eps; the sum exponent
// is the alpha at which the growth of sum_{y > eps} y^alpha, measured by its
// dyadic-shell increments, stops (their fitted slope crosses zero). Both use
// the finer half of the dyadic scales spanning the data (at least three).
inline TailExponents tail_exponent_pair(std::vector<double> lengths) {
  TailExponents out;
  for (double y : lengths) require(std::isfinite(y) && y > 0.0, "tail_exponent_pair: lengths must be finite and positive");
  if (lengths.size() < kTailMinLengths) {
    out.degenerate = true;
    if (lengths.empty()) return out;
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  const double ymax = lengths.front(), ymin = lengths.back();
  // Smallest j with 2^{-j} < ymax, down to the first scale below every length.
  const int j_lo = static_cast<int>(std::floor(-std::log2(ymax))) + 1;
  int j_hi = static_cast<int>(std::ceil(-std::log2(ymin))) + 1;
  j_hi = std::max(j_hi, j_lo + 2);
  const int total = j_hi - j_lo + 1;
  const int window = std::max(3, (total + 1) / 2);
  std::vector<int> exps;
  for (int j = j_hi - window + 1; j <= j_hi; ++j) exps.push_back(j);

  std::vector<double> lx, ly;
  for (int j : exps) {
    const double eps = std::ldexp(1.0, -j);
    const auto count = static_cast<double>(
        std::count_if(lengths.begin(), lengths.end(), [eps](double y) { return y > eps; }));
    if (count <= 0.0) continue;
    lx.push_back(static_cast<double>(j) * std::log(2.0));
    ly.push_back(std::log(count));
  }
  if (lx.size() >= 2) {
    const LinearFit fit = least_squares(lx, ly);
    out.count_exponent = std::max(0.0, fit.slope);
    for (std::size_t k = 0; k < lx.size(); ++k) {
      out.diagnostics.push_back({std::numeric_limits<double>::quiet_NaN(), std::exp(-lx[k]), std::exp(ly[k]),
                                 std::exp(fit.intercept + fit.slope * lx[k])});
    }
  } else {
    out.degenerate = true;
  }

  auto g = [&](double alpha) { return detail::shell_growth_slope(lengths, exps, alpha); };
  const double g0 = g(0.0);
  if (!std::isfinite(g0)) {
    out.degenerate = true;
    return out;
  }
  if (g0 <= 0.0) return out;
  double lo = 0.0, hi = 1.0;
  while (g(hi) > 0.0 && hi < 1024.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  out.sum_exponent = 0.5 * (lo + hi);
  return out;
}

// Persistent-homology complexity proxy: count exponent of the bounded
// degree-i lengths of one (the densest) sample.
inline DimensionEstimate estimate_ph_complexity(const GeneratorSpec& spec, int degree, const PhPipeline& pipeline) {
  const Barcode bc = point_cloud_barcode(generate_cloud(spec), degree, pipeline);
  std::vector<double> lengths;
  for (double y : bc.finite_lengths(degree)) {
    if (y > 0.0) lengths.push_back(y);
  }
  DimensionEstimate est;
  est.method = DimensionMethod::kPhComplexity;
  est.degree = degree;
  const TailExponents t = tail_exponent_pair(lengths);
  est.estimate = t.count_exponent;
  est.slope = t.sum_exponent;
  est.degenerate = t.degenerate;
  est.diagnostics = t.diagnostics;
  if (est.diagnostics.empty()) est.diagnostics.push_back({std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0});
  est.note = "sum exponent " + format_double(t.sum_exponent);
  return est;
}

// Trivial bound C(n, i + 1) on the number of i-simplices of a Delaunay
// triangulation of n points; throws if it does not fit in 64 bits.
inline std::uint64_t delaunay_count_bound(std::uint64_t n, int i, int m) {
  require(i >= 0 && m >= 1, "delaunay_count_bound: need i >= 0 and m >= 1");
  const std::uint64_t k = static_cast<std::uint64_t>(i) + 1;
  if (k > n) return 0;
  unsigned __int128 r = 1;
  for (std::uint64_t j = 0; j < k; ++j) {
    r = r * (n - j) / (j + 1);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw BudgetExceeded("delaunay_count_bound: result exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(r);
}

// Growth exponent of that bound from the Upper Bound Theorem:
// min(i + 1, floor((m + 1) / 2)).
inline int delaunay_growth_exponent(int i, int m) { return std::min(i + 1, (m + 1) / 2); }

}  // namespace phdim
