#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/filtration.hpp"
#include "phdim/geometry.hpp"
#include "phdim/metric.hpp"
#include "phdim/persistence.hpp"
#include "phdim/random.hpp"

namespace phdim {

inline constexpr double kAcuteTolerance = 1e-12;

// abc / 4A with A from the shoelace formula.
inline double circumradius(Point2 p, Point2 q, Point2 r) {
  const double a = std::hypot(q.x - r.x, q.y - r.y);
  const double b = std::hypot(p.x - r.x, p.y - r.y);
  const double c = std::hypot(p.x - q.x, p.y - q.y);
  const double area = 0.5 * std::abs(orient2d(p, q, r));
  const double longest = std::max({a, b, c});
  if (area <= kAcuteTolerance * longest * longest) {
    throw DegenerateInput("circumradius: points are collinear");
  }
  return a * b * c / (4.0 * area);
}

// Single PH_1 interval of three points: (L/2, R) for a strictly acute
// triangle, none otherwise. Right angles count as non-acute.
inline std::optional<Interval> triangle_persistence(Point2 p, Point2 q, Point2 r) {
  if (p == q || q == r || p == r) throw InvalidArgument("triangle_persistence: duplicate points");
  const std::array<Point2, 3> v{p, q, r};
  for (int k = 0; k < 3; ++k) {
    const Point2 o = v[k], s = v[(k + 1) % 3], t = v[(k + 2) % 3];
    const double ux = s.x - o.x, uy = s.y - o.y, wx = t.x - o.x, wy = t.y - o.y;
    const double scale = std::hypot(ux, uy) * std::hypot(wx, wy);
    if (ux * wx + uy * wy <= kAcuteTolerance * scale) return std::nullopt;
  }
  const double longest = std::max({std::hypot(p.x - q.x, p.y - q.y), std::hypot(q.x - r.x, q.y - r.y),
                                   std::hypot(p.x - r.x, p.y - r.y)});
  return Interval{1, longest / 2.0, circumradius(p, q, r)};
}

inline double tp1(double x, double y1, double y2) {
  require(x > 0.0, "tp1: x must be positive");
  return std::sqrt((x * x + y1 * y1) * (x * x + y2 * y2)) / (2.0 * x) - (y1 - y2) / 2.0;
}

inline double tp2(double x, double y1, double y2) {
  require(x > 0.0, "tp2: x must be positive");
  return std::sqrt((x * x + y1 * y1) * (x * x + y2 * y2)) / (2.0 * x) - std::sqrt(x * x + y1 * y1) / 2.0;
}

// c^2 N / (2 (c sqrt(N) + N)), attained at (c sqrt(N) + N, N, -N).
inline double tp1_corner_value(double n, double c) { return c * c * n / (2.0 * (c * std::sqrt(n) + n)); }

// (c^2 + N - sqrt(N (c^2 + N))) / 2, attained at (N, c sqrt(N), -c sqrt(N)).
inline double tp2_corner_value(double n, double c) { return 0.5 * (c * c + n - std::sqrt(n * (c * c + n))); }

struct TpGridResult {
  double corner_value = 0.0;  // closed form
  double corner_eval = 0.0;   // formula evaluated at the corner
  double sampled_min = 0.0;
  std::array<double, 3> argmin{};
  std::array<double, 3> corner{};
  std::array<double, 3> cell{};  // grid spacing per coordinate at the argmin
  bool min_ok = false;
  bool at_corner = false;
  bool passed() const { return min_ok && at_corner; }
};

struct TpMinimaReport {
  double n = 0.0, c = 0.0;
  int steps = 0;
  TpGridResult tp1, tp2;
  bool passed() const { return tp1.passed() && tp2.passed(); }
};

// Samples both constraint boxes on (steps + 1)^3 grids: c sqrt(N) <= y1 <= N,
// -N <= y2 <= -c sqrt(N), and x in [sqrt(-y1 y2) + c sqrt(N), that + N] for
// TP_1 or x in [c sqrt(N), N] for TP_2.
inline TpMinimaReport verify_tp_minima(double n, double c, int steps = 32) {
  require(c > 0.0, "verify_tp_minima: c must be positive");
  require(n >= c * c, "verify_tp_minima: infeasible constraints (need N >= c^2)");
  require(steps >= 8, "verify_tp_minima: need at least 8 grid steps");
  TpMinimaReport rep;
  rep.n = n;
  rep.c = c;
  rep.steps = steps;
  const double lo = c * std::sqrt(n);
  const double h = (n - lo) / steps;
  auto axis = [&](int k) { return lo + h * k; };

  auto run = [&](TpGridResult& r, bool first) {
    r.sampled_min = kInfinity;
    for (int i1 = 0; i1 <= steps; ++i1) {
      const double y1 = axis(i1);
      for (int i2 = 0; i2 <= steps; ++i2) {
        const double y2 = -axis(i2);
        const double x0 = first ? std::sqrt(-y1 * y2) + lo : lo;
        const double hx = first ? n / steps : h;
        for (int ix = 0; ix <= steps; ++ix) {
          const double x = x0 + hx * ix;
          const double v = first ? tp1(x, y1, y2) : tp2(x, y1, y2);
          if (v < r.sampled_min) {
            r.sampled_min = v;
            r.argmin = {x, y1, y2};
            r.cell = {hx, h, h};
          }
        }
      }
    }
    if (first) {
      r.corner = {lo + n, n, -n};
      r.corner_value = tp1_corner_value(n, c);
      r.corner_eval = tp1(r.corner[0], r.corner[1], r.corner[2]);
    } else {
      r.corner = {n, lo, -lo};
      r.corner_value = tp2_corner_value(n, c);
      r.corner_eval = tp2(r.corner[0], r.corner[1], r.corner[2]);
    }
    r.min_ok = r.sampled_min >= r.corner_value - kTolerance &&
               std::abs(r.corner_eval - r.corner_value) <= kTolerance * std::max(1.0, r.corner_value);
    r.at_corner = true;
    for (int k = 0; k < 3; ++k) {
      if (std::abs(r.argmin[k] - r.corner[k]) > r.cell[k] * (1.0 + 1e-12)) r.at_corner = false;
    }
  };
  run(rep.tp1, true);
  run(rep.tp2, false);
  return rep;
}

struct StableClassCertificate {
  PointCloud lattice_points;
  Interval witness;
  double size = 0.0;  // witness length - sqrt(m)
};

inline constexpr std::size_t kStableMaxPoints = 60;

inline double longest_ph1_length(const PointCloud& pc) {
  FiltrationParams fp;
  fp.max_dim = 2;
  const Barcode bc = persistent_homology(cech_filtration(pc, fp));
  double best = 0.0;
  for (const auto& iv : bc.degree(1)) {
    if (iv.finite()) best = std::max(best, iv.length());
  }
  return best;
}

// Sufficient condition for a stable PH_1-class: the longest Cech PH_1
// interval of the cube centres exceeds sqrt(m); the certified size is the
// excess.
inline std::optional<StableClassCertificate> stable_class_certificate(const PointCloud& x) {
  require(x.dim() == 2 || x.dim() == 3, "stable_class_certificate: ambient dimension must be 2 or 3");
  for (double v : x.coords()) require(v == std::floor(v), "stable_class_certificate: points must be lattice points");
  if (x.size() > kStableMaxPoints) {
    throw BudgetExceeded("stable_class_certificate: more than 60 points exceeds the Cech 2-skeleton budget");
  }
  FiltrationParams fp;
  fp.max_dim = 2;
  const Barcode bc = persistent_homology(cech_filtration(x, fp));
  std::optional<Interval> best;
  for (const auto& iv : bc.degree(1)) {
    if (iv.finite() && (!best || iv.length() > best->length())) best = iv;
  }
  const double root_m = std::sqrt(static_cast<double>(x.dim()));
  if (!best || best->length() <= root_m) return std::nullopt;
  return StableClassCertificate{x, *best, best->length() - root_m};
}

struct RobustnessReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double min_longest = kInfinity;
  bool passed() const { return failures == 0; }
};

// Randomized falsification: each trial moves every point uniformly within
// its unit cube [p - 1/2, p + 1/2]^m and requires a PH_1 interval at least
// as long as the certified size.
inline RobustnessReport check_certificate_robustness(const StableClassCertificate& cert, std::size_t trials = 100,
                                                     std::uint64_t seed = 0) {
  SplitMix64 rng(derive_seed(seed, "stable-perturb"));
  RobustnessReport rep;
  const PointCloud& base = cert.lattice_points;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> coords = base.coords();
    for (double& v : coords) v += rng.uniform(-0.5, 0.5);
    const double longest = longest_ph1_length(PointCloud(base.dim(), std::move(coords)));
    rep.min_longest = std::min(rep.min_longest, longest);
    if (longest < cert.size) ++rep.failures;
    ++rep.trials;
  }
  return rep;
}

struct XiSearchResult {
  std::size_t size = 0;
  std::vector<std::array<int, 2>> witness;  // lattice points of [N]^2, sorted row-major
  bool exact = false;
};

inline constexpr std::size_t kXiExactMaxN = 4;

namespace detail {

inline std::vector<Point2> grid_points(std::size_t n) {
  std::vector<Point2> pts;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) pts.push_back({static_cast<double>(i), static_cast<double>(j)});
  }
  return pts;
}

inline bool disqualifying(Point2 a, Point2 b, Point2 c, double threshold) {
  const auto iv = triangle_persistence(a, b, c);
  return iv && iv->length() > threshold;
}

inline XiSearchResult make_xi_result(const std::vector<Point2>& pts, const std::vector<std::size_t>& chosen,
                                     bool exact) {
  XiSearchResult r;
  r.size = chosen.size();
  r.exact = exact;
  for (std::size_t k : chosen) r.witness.push_back({static_cast<int>(pts[k].x), static_cast<int>(pts[k].y)});
  std::sort(r.witness.begin(), r.witness.end());
  return r;
}

inline XiSearchResult xi_exact(std::size_t n, double threshold) {
  const auto pts = grid_points(n);
  const std::size_t p = pts.size();
  std::vector<std::uint32_t> bad;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b) {
      for (std::size_t c = b + 1; c < p; ++c) {
        if (disqualifying(pts[a], pts[b], pts[c], threshold)) {
          bad.push_back((1u << a) | (1u << b) | (1u << c));
        }
      }
    }
  }
  // Among maximum subsets, the lexicographically smallest sorted index list.
  std::uint32_t best = 0;
  int best_size = -1;
  auto lex_less = [](std::uint32_t x, std::uint32_t y) {
    // Sorted index lists of equal size compare by their lowest differing bit.
    const std::uint32_t diff = x ^ y;
    return (x & diff & (~diff + 1)) != 0;
  };
  const std::uint64_t total = std::uint64_t{1} << p;
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto mask = static_cast<std::uint32_t>(s);
    const int size = std::popcount(mask);
    if (size < best_size) continue;
    bool ok = true;
    for (std::uint32_t t : bad) {
      if ((mask & t) == t) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (size > best_size || lex_less(mask, best)) {
      best = mask;
      best_size = size;
    }
  }
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < p; ++k) {
    if (best & (1u << k)) chosen.push_back(k);
  }
  return make_xi_result(pts, chosen, true);
}

// Randomized greedy with restarts; starts from the best subset of the
// (N-1)-grid so the result never decreases in N.
inline XiSearchResult xi_local(std::size_t n, double threshold, std::uint64_t seed, std::size_t restarts,
                               const XiSearchResult& smaller) {
  const auto pts = grid_points(n);
  const std::size_t p = pts.size();
  auto index_of = [n](int i, int j) { return static_cast<std::size_t>(i - 1) * n + static_cast<std::size_t>(j - 1); };
  auto can_add = [&](const std::vector<std::size_t>& set, std::size_t k) {
    for (std::size_t a = 0; a < set.size(); ++a) {
      for (std::size_t b = a + 1; b < set.size(); ++b) {
        if (disqualifying(pts[set[a]], pts[set[b]], pts[k], threshold)) return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> best;
  for (const auto& w : smaller.witness) best.push_back(index_of(w[0], w[1]));

  SplitMix64 rng(derive_seed(seed, "xi-local"));
  std::vector<std::size_t> order(p);
  for (std::size_t r = 0; r <= restarts; ++r) {
    for (std::size_t k = 0; k < p; ++k) order[k] = k;
    if (r > 0) {
      for (std::size_t k = p; k > 1; --k) std::swap(order[k - 1], order[rng.uniform_index(k)]);
    }
    // Restart 0 extends the inherited subset in row-major order.
    std::vector<std::size_t> set = r == 0 ? best : std::vector<std::size_t>{};
    std::vector<char> in(p, 0);
    for (std::size_t k : set) in[k] = 1;
    for (std::size_t k : order) {
      if (!in[k] && can_add(set, k)) {
        set.push_back(k);
        in[k] = 1;
      }
    }
    if (set.size() > best.size()) best = set;
  }
  return make_xi_result(pts, best, false);
}

}  // namespace detail

// Largest subset of [N]^2 with no triple forming an acute triangle of total
// persistence above `threshold`. Exhaustive (exact) for N <= 4; otherwise a
// seeded local search with exact = false. The triangle test is only a
// sufficient condition for stability, so the size bounds xi from above.
inline XiSearchResult xi_search(std::size_t n, double threshold = std::sqrt(2.0) + 1.0, std::uint64_t seed = 0,
                                std::size_t restarts = 64) {
  require(n >= 1, "xi_search: N must be >= 1");
  if (n <= kXiExactMaxN) return detail::xi_exact(n, threshold);
  XiSearchResult r = detail::xi_exact(kXiExactMaxN, threshold);
  for (std::size_t k = kXiExactMaxN + 1; k <= n; ++k) {
    r = detail::xi_local(k, threshold, derive_seed(seed, "xi-" + std::to_string(k)), restarts, r);
  }
  return r;
}

inline PointCloud witness_cloud(const XiSearchResult& r) {
  require(!r.witness.empty(), "witness_cloud: empty witness");
  std::vector<double> coords;
  for (const auto& w : r.witness) {
    coords.push_back(w[0]);
    coords.push_back(w[1]);
  }
  return PointCloud(2, std::move(coords));
}

}  // namespace phdim
