#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "phdim/bottleneck.hpp"
#include "phdim/common.hpp"
#include "phdim/dimension.hpp"
#include "phdim/extremal.hpp"
#include "phdim/filtration.hpp"
#include "phdim/generators.hpp"
#include "phdim/metric.hpp"
#include "phdim/mst.hpp"
#include "phdim/persistence.hpp"

namespace phdim {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

struct VerifyOptions {
  // Substring matched against check names; empty runs everything.
  std::string filter;
  // Injection point for mutation smoke tests.
  std::function<FiniteMetricSpace(int)> bipartite_generator = gen_bipartite_space;
};

namespace detail {

// Rank over Z/2 of a dense 0/1 matrix given as rows of bitsets.
inline std::size_t gf2_rank(std::vector<std::vector<std::uint8_t>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot][c]) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][c]) {
        for (std::size_t k = c; k < cols; ++k) rows[r][k] ^= rows[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

// b_1 of the subcomplex of simplices with value <= eps, by matrix ranks.
inline std::size_t betti1_at(const Filtration& f, double eps) {
  std::vector<std::vector<Index>> verts, edges, tris;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.value(i) > eps) continue;
    const auto s = f.vertices(i);
    std::vector<Index> v(s.begin(), s.end());
    if (f.dim(i) == 0) verts.push_back(v);
    if (f.dim(i) == 1) edges.push_back(v);
    if (f.dim(i) == 2) tris.push_back(v);
  }
  auto boundary_rank = [](const std::vector<std::vector<Index>>& hi, const std::vector<std::vector<Index>>& lo) {
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& s : hi) {
      std::vector<std::uint8_t> row(lo.size(), 0);
      for (std::size_t k = 0; k < lo.size(); ++k) {
        row[k] = std::includes(s.begin(), s.end(), lo[k].begin(), lo[k].end()) ? 1 : 0;
      }
      rows.push_back(std::move(row));
    }
    return gf2_rank(std::move(rows));
  };
  const std::size_t r1 = boundary_rank(edges, verts);
  const std::size_t r2 = boundary_rank(tris, edges);
  return edges.size() - r1 - r2;
}

inline std::string ok_word(bool ok) { return ok ? "ok" : "FAIL"; }

inline CheckResult check_bipartite(const VerifyOptions& opt) {
  CheckResult r{1, "bipartite-exact-counts", true, "", 0.0};
  std::ostringstream d;
  FiltrationParams fp;
  fp.max_dim = 2;
  for (int level = 1; level <= 4; ++level) {
    const Barcode bc = persistent_homology(rips_filtration(opt.bipartite_generator(level), fp));
    const std::size_t expected = (std::size_t{1} << (2 * level)) - (std::size_t{1} << (level + 1)) + 1;
    bool ok = bc.count(1) == expected;
    for (const auto& iv : bc.degree(1)) {
      ok = ok && iv.birth == std::ldexp(1.0, -level - 1) && iv.death == std::ldexp(1.0, -level);
    }
    d << "n=" << level << ": " << bc.count(1) << "/" << expected << ' ' << ok_word(ok) << "; ";
    r.passed = r.passed && ok;
  }
  r.detail = d.str();
  return r;
}

inline CheckResult check_triangle() {
  CheckResult r{2, "equilateral-triangle", true, "", 0.0};
  const PointCloud tri = PointCloud::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}});
  FiltrationParams fp;
  fp.max_dim = 2;
  const Filtration f = cech_filtration(tri, fp);
  const auto h1 = persistent_homology(f).degree(1);
  const double death = 1.0 / std::sqrt(3.0);
  const bool bars = h1.size() == 1 && std::abs(h1[0].birth - 0.5) <= 1e-9 && std::abs(h1[0].death - death) <= 1e-9;
  std::ostringstream d;
  d << "bars " << ok_word(bars);
  r.passed = bars;
  for (double eps : {0.49, 0.55, 0.6}) {
    std::size_t from_bars = 0;
    for (const auto& iv : h1) from_bars += (iv.birth <= eps && eps < iv.death) ? 1 : 0;
    const std::size_t rank_b1 = betti1_at(f, eps);
    d << "; b1(" << eps << ")=" << rank_b1 << " vs " << from_bars;
    r.passed = r.passed && rank_b1 == from_bars;
  }
  r.detail = d.str();
  return r;
}

inline CheckResult check_mst_bijection() {
  CheckResult r{3, "mst-ph0-bijection", true, "", 0.0};
  double worst = 0.0;
  std::size_t failures = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const PointCloud pc = gen_uniform_cube(20 + 5 * static_cast<std::size_t>(s), 2, derive_seed(s, "verify-mst"));
    for (ComplexKind k : {ComplexKind::kRips, ComplexKind::kCech}) {
      const auto rep = verify_mst_ph0_correspondence(pc, k, 1e-9);
      worst = std::max(worst, rep.max_error);
      failures += rep.passed ? 0 : 1;
    }
  }
  r.passed = failures == 0;
  r.detail = "50 clouds, n=20..265, failures " + std::to_string(failures) + ", max error " + format_double(worst);
  return r;
}

inline CheckResult check_stability() {
  CheckResult r{4, "bottleneck-stability", true, "", 0.0};
  FiltrationParams fp;
  fp.max_dim = 2;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 8 + static_cast<std::size_t>(s % 17);
    const PointCloud x = gen_uniform_cube(n, 2, derive_seed(s, "verify-stability"));
    const double magnitude = 0.002 * static_cast<double>(1 + s % 25);
    const PointCloud y = jittered(x, magnitude, derive_seed(s, "verify-jitter"));
    const double dh = hausdorff_distance(x, y);
    const Barcode bx = persistent_homology(cech_filtration(x, fp));
    const Barcode by = persistent_homology(cech_filtration(y, fp));
    for (int deg : {0, 1}) {
      const double db = bottleneck_distance(bx, by, deg);
      if (db > dh + 1e-9) ++violations;
      if (dh > 0.0) worst_ratio = std::max(worst_ratio, db / dh);
    }
  }
  r.passed = violations == 0;
  r.detail = "100 pairs (cech), violations " + std::to_string(violations) + ", max d_B/d_H " +
             format_double(worst_ratio);
  return r;
}

inline CheckResult check_rips_linearity() {
  CheckResult r{5, "rips-ph1-linearity", true, "", 0.0};
  std::ostringstream d;
  FiltrationParams fp;
  fp.max_dim = 2;
  for (std::size_t n : {100u, 200u, 400u}) {
    const PointCloud pc = gen_uniform_cube(n, 2, derive_seed(n, "verify-rips"));
    const FiniteMetricSpace fms = distance_matrix(pc);
    const Barcode bc = persistent_homology(rips_filtration(fms, fp));
    std::size_t link_max = 0;
    for (std::size_t v = 0; v < n; ++v) link_max = std::max(link_max, link_ph0_count(fms, v));
    const bool ok = bc.count(1) <= 5 * n && link_max <= 5;
    d << "n=" << n << ": |PH1|=" << bc.count(1) << " link max " << link_max << ' ' << ok_word(ok) << "; ";
    r.passed = r.passed && ok;
  }
  r.detail = d.str();
  return r;
}

inline CheckResult check_sierpinski_dimensions() {
  CheckResult r{6, "sierpinski-dimensions", true, "", 0.0};
  GeneratorSpec spec;
  spec.family = Family::kSierpinski;
  spec.n = 50'000;
  const double box = estimate_box_dimension(generate_cloud(spec), dyadic_scales(7, 3)).estimate;
  const std::vector<std::size_t> sizes{500, 1000, 2000, 4000};
  const double ph = estimate_ph_dimension(spec, 1, PhPipeline{}, sizes).estimate;
  const double mst = estimate_mst_dimension(spec, sizes).estimate;
  const double target = std::log(3.0) / std::log(2.0);
  const bool box_ok = std::abs(box - target) <= 0.05;
  const bool ph_ok = ph >= 1.39 && ph <= 1.79;
  const bool mst_ok = std::abs(mst - target) <= 0.15;
  r.passed = box_ok && ph_ok && mst_ok;
  r.detail = "box " + format_double(box) + ' ' + ok_word(box_ok) + "; ph1 " + format_double(ph) + ' ' +
             ok_word(ph_ok) + "; mst " + format_double(mst) + ' ' + ok_word(mst_ok);
  return r;
}

inline CheckResult check_arcs() {
  CheckResult r{7, "arcs-experiment", true, "", 0.0};
  const ArcsReport rep = arcs_experiment({50, 100, 200, 400});
  const bool slope_ok = rep.count_slope >= 1.3 && rep.count_slope <= 1.7;
  const bool ratio_ok = rep.e1_ratio < 3.0;
  r.passed = slope_ok && ratio_ok;
  std::ostringstream d;
  d << "count slope " << format_double(rep.count_slope) << ' ' << ok_word(slope_ok) << "; E1 max/min "
    << format_double(rep.e1_ratio) << ' ' << ok_word(ratio_ok);
  r.detail = d.str();
  return r;
}

inline CheckResult check_tp_formulas() {
  CheckResult r{8, "tp-formulas", true, "", 0.0};
  const double v1 = tp1(130.0, 100.0, -100.0);
  const double v2 = tp2(100.0, 30.0, -30.0);
  const bool c1 = std::abs(v1 - tp1_corner_value(100.0, 3.0)) <= 1e-9;
  const bool c2 = std::abs(v2 - tp2_corner_value(100.0, 3.0)) <= 1e-9;
  const bool m100 = verify_tp_minima(100.0, 3.0).passed();
  const bool m400 = verify_tp_minima(400.0, 3.0).passed();
  r.passed = c1 && c2 && m100 && m400;
  r.detail = "tp1 " + format_double(v1) + ' ' + ok_word(c1) + "; tp2 " + format_double(v2) + ' ' + ok_word(c2) +
             "; minima (100,3) " + ok_word(m100) + ", (400,3) " + ok_word(m400);
  return r;
}

inline CheckResult check_tail_exponents() {
  CheckResult r{9, "tail-exponent-pair", true, "", 0.0};
  std::vector<double> lengths;
  for (int k = 0; k <= 10; ++k) lengths.insert(lengths.end(), std::size_t{1} << (2 * k), std::ldexp(1.0, -k));
  const TailExponents t = tail_exponent_pair(lengths);
  const bool ok = t.sum_exponent >= 1.95 && t.sum_exponent <= 2.05 && t.count_exponent >= 1.95 &&
                  t.count_exponent <= 2.05;
  r.passed = ok;
  r.detail = "sum " + format_double(t.sum_exponent) + ", count " + format_double(t.count_exponent);
  return r;
}

inline CheckResult check_xi() {
  CheckResult r{10, "xi-ground-truth", true, "", 0.0};
  const XiSearchResult x2 = xi_search(2);
  const XiSearchResult x3 = xi_search(3);
  r.passed = x2.size == 4 && x2.exact && x3.size == 9 && x3.exact;
  r.detail = "xi(2)=" + std::to_string(x2.size) + ", xi(3)=" + std::to_string(x3.size);
  return r;
}

}  // namespace detail

struct NamedCheck {
  int criterion;
  std::string name;
  std::function<CheckResult(const VerifyOptions&)> run;
};

inline std::vector<NamedCheck> verify_checks() {
  return {
      {1, "bipartite-exact-counts", detail::check_bipartite},
      {2, "equilateral-triangle", [](const VerifyOptions&) { return detail::check_triangle(); }},
      {3, "mst-ph0-bijection", [](const VerifyOptions&) { return detail::check_mst_bijection(); }},
      {4, "bottleneck-stability", [](const VerifyOptions&) { return detail::check_stability(); }},
      {5, "rips-ph1-linearity", [](const VerifyOptions&) { return detail::check_rips_linearity(); }},
      {6, "sierpinski-dimensions", [](const VerifyOptions&) { return detail::check_sierpinski_dimensions(); }},
      {7, "arcs-experiment", [](const VerifyOptions&) { return detail::check_arcs(); }},
      {8, "tp-formulas", [](const VerifyOptions&) { return detail::check_tp_formulas(); }},
      {9, "tail-exponent-pair", [](const VerifyOptions&) { return detail::check_tail_exponents(); }},
      {10, "xi-ground-truth", [](const VerifyOptions&) { return detail::check_xi(); }},
  };
}

// Runs the checks whose name contains the filter. A check that throws is
// reported as failed with the exception text.
inline VerifyReport verify_suite(const VerifyOptions& options = {}, std::ostream* progress = nullptr) {
  VerifyReport report;
  for (const auto& check : verify_checks()) {
    if (!options.filter.empty() && check.name.find(options.filter) == std::string::npos) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = check.run(options);
    } catch (const std::exception& e) {
      res = CheckResult{check.criterion, check.name, false, std::string("error: ") + e.what(), 0.0};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) {
      *progress << (res.passed ? "PASS " : "FAIL ") << res.criterion << ' ' << res.name << " (" << res.seconds
                << " s): " << res.detail << '\n';
      progress->flush();
    }
    report.checks.push_back(std::move(res));
  }
  return report;
}

}  // namespace phdim
