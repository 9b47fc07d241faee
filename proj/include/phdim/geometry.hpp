#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/metric.hpp"

namespace phdim {

inline constexpr std::size_t kMaxBallDim = 8;

namespace detail {

struct Ball {
  std::array<double, kMaxBallDim> center{};
  double radius_sq = -1.0;  // < 0 marks the empty ball
};

inline bool ball_contains(const Ball& b, std::span<const double> p, std::size_t dim) {
  if (b.radius_sq < 0.0) return false;
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = p[k] - b.center[k];
    s += d * d;
  }
  // Relative slack so that points on the sphere are not re-added.
  return s <= b.radius_sq * (1.0 + 1e-12) + 1e-300;
}

// Smallest ball with every support point on its boundary: the circumcenter
// inside the affine hull, c = r0 + sum_j lambda_j (r_j - r0) with
// 2 (r_j - r0).(r_k - r0) lambda_k = |r_j - r0|^2.
inline Ball circumball(std::span<const std::span<const double>> support, std::size_t dim) {
  Ball b;
  if (support.empty()) return b;
  const auto& r0 = support[0];
  for (std::size_t k = 0; k < dim; ++k) b.center[k] = r0[k];
  b.radius_sq = 0.0;
  const std::size_t q = support.size() - 1;
  if (q == 0) return b;

  std::array<std::array<double, kMaxBallDim>, kMaxBallDim + 1> diff{};
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t k = 0; k < dim; ++k) diff[j][k] = support[j + 1][k] - r0[k];
  }
  std::array<std::array<double, kMaxBallDim + 2>, kMaxBallDim + 1> a{};
  for (std::size_t j = 0; j < q; ++j) {
    double rhs = 0.0;
    for (std::size_t k = 0; k < dim; ++k) rhs += diff[j][k] * diff[j][k];
    for (std::size_t l = 0; l < q; ++l) {
      double g = 0.0;
      for (std::size_t k = 0; k < dim; ++k) g += diff[j][k] * diff[l][k];
      a[j][l] = 2.0 * g;
    }
    a[j][q] = rhs;
  }
  // Gaussian elimination with partial pivoting; a vanishing pivot means the
  // support is affinely dependent and that direction is dropped.
  std::array<bool, kMaxBallDim + 1> dropped{};
  double scale = 0.0;
  for (std::size_t j = 0; j < q; ++j) scale = std::max(scale, std::abs(a[j][j]));
  for (std::size_t col = 0; col < q; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < q; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (std::abs(a[col][col]) <= 1e-14 * scale) {
      dropped[col] = true;
      continue;
    }
    for (std::size_t r = 0; r < q; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= q; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (std::size_t j = 0; j < q; ++j) {
    if (dropped[j]) continue;
    const double lambda = a[j][q] / a[j][j];
    for (std::size_t k = 0; k < dim; ++k) b.center[k] += lambda * diff[j][k];
  }
  double r2 = 0.0;
  for (const auto& p : support) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = p[k] - b.center[k];
      s += d * d;
    }
    r2 = std::max(r2, s);
  }
  b.radius_sq = r2;
  return b;
}

// Welzl's recursion: the minimal ball of points[0..count) with `support` on
// the boundary.
inline Ball welzl(std::span<const std::span<const double>> points, std::size_t count,
                  std::vector<std::span<const double>>& support, std::size_t dim) {
  if (count == 0 || support.size() == dim + 1) return circumball(support, dim);
  const auto& p = points[count - 1];
  Ball b = welzl(points, count - 1, support, dim);
  if (ball_contains(b, p, dim)) return b;
  support.push_back(p);
  b = welzl(points, count - 1, support, dim);
  support.pop_back();
  return b;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace detail

// Radius of the smallest closed ball containing three points in any
// dimension: half the longest edge unless the triangle is acute, in which
// case the circumradius abc / 4A with 4A^2 = |u|^2 |v|^2 - (u.v)^2.
inline double triangle_enclosing_radius(std::span<const double> a, std::span<const double> b,
                                        std::span<const double> c) {
  const double ab = squared_distance(a, b);
  const double bc = squared_distance(b, c);
  const double ca = squared_distance(c, a);
  const double longest = std::max({ab, bc, ca});
  if (longest >= (ab + bc + ca) - longest) return std::sqrt(longest) / 2.0;
  // u = b - a, v = c - a
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double u = b[k] - a[k], v = c[k] - a[k];
    uu += u * u;
    vv += v * v;
    uv += u * v;
  }
  const double four_area_sq = uu * vv - uv * uv;  // (2A)^2
  if (four_area_sq <= 0.0) return std::sqrt(longest) / 2.0;
  // Clamped so rounding never puts the triangle below its longest edge.
  return std::max(std::sqrt(ab * bc * ca / four_area_sq), std::sqrt(longest)) / 2.0;
}

// Radius of the smallest closed ball containing all points (ambient
// dimension <= 8).
inline double minimal_enclosing_ball_radius(std::span<const std::span<const double>> points) {
  require(!points.empty(), "minimal_enclosing_ball_radius: empty input");
  const std::size_t dim = points.front().size();
  require(dim >= 1 && dim <= kMaxBallDim, "minimal_enclosing_ball_radius: dimension must be in [1, 8]");
  for (const auto& p : points) {
    require(p.size() == dim, "minimal_enclosing_ball_radius: dimension mismatch");
  }
  switch (points.size()) {
    case 1: return 0.0;
    case 2: return euclidean_distance(points[0], points[1]) / 2.0;
    case 3: return triangle_enclosing_radius(points[0], points[1], points[2]);
    default: break;
  }
  std::vector<std::span<const double>> support;
  support.reserve(dim + 1);
  const detail::Ball b = detail::welzl(points, points.size(), support, dim);
  return std::sqrt(std::max(0.0, b.radius_sq));
}

inline double minimal_enclosing_ball_radius(const PointCloud& pc, std::span<const Index> vertices) {
  std::array<std::span<const double>, 16> buf;
  std::vector<std::span<const double>> heap;
  std::span<std::span<const double>> pts;
  if (vertices.size() <= buf.size()) {
    for (std::size_t i = 0; i < vertices.size(); ++i) buf[i] = pc.point(vertices[i]);
    pts = std::span(buf.data(), vertices.size());
  } else {
    for (Index v : vertices) heap.push_back(pc.point(v));
    pts = heap;
  }
  return minimal_enclosing_ball_radius(std::span<const std::span<const double>>(pts));
}

// ---------------------------------------------------------------------------
// Planar predicates.

struct Point2 {
  double x = 0.0, y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Twice the signed area of (a, b, c); positive for counter-clockwise.
inline double orient2d(Point2 a, Point2 b, Point2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Positive iff d lies strictly inside the circumcircle of the
// counter-clockwise triangle (a, b, c).
inline double incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
         clift * (adx * bdy - ady * bdx);
}

namespace detail {

// Error-free transformations and nonoverlapping floating-point expansions
// (components in increasing magnitude, zeros eliminated). The sign of an
// expansion is the sign of its last component.
using Expansion = std::vector<double>;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline Expansion exact_diff(double a, double b) {
  double x, y;
  two_sum(a, -b, x, y);
  Expansion e;
  if (y != 0.0) e.push_back(y);
  if (x != 0.0) e.push_back(x);
  return e;
}

inline Expansion grow(const Expansion& e, double b) {
  Expansion h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double c : e) {
    double x, y;
    two_sum(q, c, x, y);
    if (y != 0.0) h.push_back(y);
    q = x;
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  if (h.size() == 1 && h[0] == 0.0) h.clear();
  return h;
}

inline Expansion add(const Expansion& e, const Expansion& f) {
  Expansion h = e;
  for (double c : f) h = grow(h, c);
  return h;
}

inline Expansion negate(Expansion e) {
  for (double& c : e) c = -c;
  return e;
}

inline Expansion scale(const Expansion& e, double b) {
  Expansion h;
  if (e.empty() || b == 0.0) return h;
  double q = e[0] * b;
  double lo = std::fma(e[0], b, -q);
  if (lo != 0.0) h.push_back(lo);
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double t_hi = e[i] * b;
    const double t_lo = std::fma(e[i], b, -t_hi);
    double x, y;
    two_sum(q, t_lo, x, y);
    if (y != 0.0) h.push_back(y);
    two_sum(t_hi, x, q, y);
    if (y != 0.0) h.push_back(y);
  }
  if (q != 0.0) h.push_back(q);
  return h;
}

inline Expansion mul(const Expansion& e, const Expansion& f) {
  Expansion h;
  for (double c : f) h = add(h, scale(e, c));
  return h;
}

inline int sign(const Expansion& e) {
  if (e.empty()) return 0;
  return e.back() > 0.0 ? 1 : (e.back() < 0.0 ? -1 : 0);
}

}  // namespace detail

namespace detail {

inline Expansion orient2d_expansion(Point2 a, Point2 b, Point2 c) {
  return add(mul(exact_diff(b.x, a.x), exact_diff(c.y, a.y)),
             negate(mul(exact_diff(b.y, a.y), exact_diff(c.x, a.x))));
}

}  // namespace detail

// Exact sign of orient2d: +1 counter-clockwise, -1 clockwise, 0 collinear.
inline int orient2d_sign(Point2 a, Point2 b, Point2 c) {
  const double l = (b.x - a.x) * (c.y - a.y), r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  const double bound = 3.3306690738754716e-16 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::sign(detail::orient2d_expansion(a, b, c));
}

// orient2d correctly rounded up to a few ulps, also for slivers.
inline double orient2d_accurate(Point2 a, Point2 b, Point2 c) {
  const double l = (b.x - a.x) * (c.y - a.y), r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  if (std::abs(det) > 1e-12 * (std::abs(l) + std::abs(r))) return det;
  double v = 0.0;
  for (double comp : detail::orient2d_expansion(a, b, c)) v += comp;
  return v;
}

// Exact sign of incircle: +1 iff d is strictly inside the circumcircle of
// the counter-clockwise triangle (a, b, c).
inline int incircle_sign(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                     clift * (adx * bdy - ady * bdx);
  const double permanent = (std::abs(bdx * cdy) + std::abs(bdy * cdx)) * alift +
                           (std::abs(cdx * ady) + std::abs(cdy * adx)) * blift +
                           (std::abs(adx * bdy) + std::abs(ady * bdx)) * clift;
  const double bound = 1.1102230246251577e-15 * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  using namespace detail;
  const Expansion ex = exact_diff(a.x, d.x), ey = exact_diff(a.y, d.y);
  const Expansion fx = exact_diff(b.x, d.x), fy = exact_diff(b.y, d.y);
  const Expansion gx = exact_diff(c.x, d.x), gy = exact_diff(c.y, d.y);
  const Expansion al = add(mul(ex, ex), mul(ey, ey));
  const Expansion bl = add(mul(fx, fx), mul(fy, fy));
  const Expansion cl = add(mul(gx, gx), mul(gy, gy));
  const Expansion m1 = add(mul(fx, gy), negate(mul(fy, gx)));
  const Expansion m2 = add(mul(gx, ey), negate(mul(gy, ex)));
  const Expansion m3 = add(mul(ex, fy), negate(mul(ey, fx)));
  return sign(add(add(mul(al, m1), mul(bl, m2)), mul(cl, m3)));
}

inline double circumradius_2d(Point2 a, Point2 b, Point2 c) {
  const double ab = std::hypot(a.x - b.x, a.y - b.y);
  const double bc = std::hypot(b.x - c.x, b.y - c.y);
  const double ca = std::hypot(c.x - a.x, c.y - a.y);
  const double twice_area = std::abs(orient2d_accurate(a, b, c));
  return ab * bc * ca / (2.0 * twice_area);
}

}  // namespace phdim
