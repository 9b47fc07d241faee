#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/geometry.hpp"
#include "phdim/metric.hpp"

namespace phdim {

using Triangle = std::array<Index, 3>;

namespace detail {

inline constexpr Index kGhost = std::numeric_limits<Index>::max();

// Bowyer-Watson over a triangulation closed by "ghost" triangles (u, v, inf)
// glued to every hull edge, so no bounding super-triangle is needed.
// A ghost (u, v, inf) stores the hull edge u -> v with the outside on its
// left.
class BowyerWatson {
 public:
  explicit BowyerWatson(std::vector<Point2> pts) : pts_(std::move(pts)) {}

  std::vector<Triangle> run() {
    const std::size_t n = pts_.size();
    if (n < 3) throw DegenerateInput("delaunay_2d: at least 3 points are required");
    {
      std::vector<Index> order(n);
      for (Index i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return pts_[a].x < pts_[b].x || (pts_[a].x == pts_[b].x && pts_[a].y < pts_[b].y);
      });
      for (std::size_t i = 1; i < n; ++i) {
        if (pts_[order[i]] == pts_[order[i - 1]]) {
          throw DegenerateInput("delaunay_2d: duplicate points");
        }
      }
    }
    // Seed triangle: points 0, 1 and the first point off their line.
    Index third = kGhost;
    for (Index i = 2; i < n; ++i) {
      if (orient2d_sign(pts_[0], pts_[1], pts_[i]) != 0) {
        third = i;
        break;
      }
    }
    if (third == kGhost) throw DegenerateInput("delaunay_2d: all points are collinear");
    Index a = 0, b = 1, c = third;
    if (orient2d_sign(pts_[a], pts_[b], pts_[c]) < 0) std::swap(a, b);
    add({a, b, c});
    add({b, a, kGhost});
    add({c, b, kGhost});
    add({a, c, kGhost});
    for (Index i = 2; i < n; ++i) {
      if (i != third) insert(i);
    }
    std::vector<Triangle> out;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (!alive_[t] || is_ghost(tris_[t])) continue;
      out.push_back(canonical(tris_[t]));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static bool is_ghost(const Triangle& t) { return t[2] == kGhost; }

  // Rotate a counter-clockwise triangle so its smallest index comes first.
  static Triangle canonical(Triangle t) {
    while (t[0] > t[1] || t[0] > t[2]) t = {t[1], t[2], t[0]};
    return t;
  }

  static std::uint64_t key(Index u, Index v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  void add(Triangle t) {
    const std::size_t id = tris_.size();
    if (!is_ghost(t)) last_ = id;
    ++alive_total_;
    tris_.push_back(t);
    alive_.push_back(true);
    for (int e = 0; e < 3; ++e) edge_owner_[key(t[e], t[(e + 1) % 3])] = id;
  }

  void kill(std::size_t id) {
    alive_[id] = false;
    --alive_total_;
    const Triangle& t = tris_[id];
    for (int e = 0; e < 3; ++e) {
      auto it = edge_owner_.find(key(t[e], t[(e + 1) % 3]));
      if (it != edge_owner_.end() && it->second == id) edge_owner_.erase(it);
    }
  }

  // Circumcircle membership; ghosts own the open half-plane beyond their
  // hull edge plus the open edge itself. Exact ties are "outside".
  bool in_circumcircle(const Triangle& t, Point2 p) const {
    if (is_ghost(t)) {
      const Point2 u = pts_[t[0]], v = pts_[t[1]];
      const int o = orient2d_sign(u, v, p);
      if (o != 0) return o > 0;
      return strictly_between(u, v, p);
    }
    return incircle_sign(pts_[t[0]], pts_[t[1]], pts_[t[2]], p) > 0;
  }

  bool contains_point(const Triangle& t, Point2 p) const {
    if (is_ghost(t)) return orient2d_sign(pts_[t[0]], pts_[t[1]], p) > 0;
    return orient2d_sign(pts_[t[0]], pts_[t[1]], p) >= 0 &&
           orient2d_sign(pts_[t[1]], pts_[t[2]], p) >= 0 &&
           orient2d_sign(pts_[t[2]], pts_[t[0]], p) >= 0;
  }

  // p lies on the line through u and v, strictly between them.
  bool on_open_segment(Index u, Index v, Point2 p) const {
    if (u == kGhost || v == kGhost) return false;
    const Point2 a = pts_[u], b = pts_[v];
    return orient2d_sign(a, b, p) == 0 && strictly_between(a, b, p);
  }

  // For p exactly on the line through distinct a and b.
  static bool strictly_between(Point2 a, Point2 b, Point2 p) {
    if (a.x != b.x) return std::min(a.x, b.x) < p.x && p.x < std::max(a.x, b.x);
    return std::min(a.y, b.y) < p.y && p.y < std::max(a.y, b.y);
  }

  // A cavity boundary edge (u, v) can be joined to p iff the new triangle
  // (u, v, p) is counter-clockwise; edges touching inf always can.
  bool visible(Index u, Index v, Point2 p) const {
    if (u == kGhost || v == kGhost) return true;
    return orient2d_sign(pts_[u], pts_[v], p) > 0;
  }

  // Visibility walk from the most recent triangle; brute force if the walk
  // does not settle.
  std::size_t locate(Point2 p) const {
    std::size_t t = last_;
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit && t < tris_.size() && alive_[t]; ++step) {
      const Triangle& tri = tris_[t];
      if (is_ghost(tri)) return contains_point(tri, p) ? t : tris_.size();
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int e = (k + static_cast<int>(step)) % 3;
        const Index u = tri[e], v = tri[(e + 1) % 3];
        if (orient2d_sign(pts_[u], pts_[v], p) < 0) {
          auto it = edge_owner_.find(key(v, u));
          if (it == edge_owner_.end()) return tris_.size();
          t = it->second;
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    return tris_.size();
  }

  void insert(Index pi) {
    const Point2 p = pts_[pi];
    std::size_t seed = locate(p);
    if (seed == tris_.size()) {
      for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (alive_[t] && !is_ghost(tris_[t]) && contains_point(tris_[t], p)) {
          seed = t;
          break;
        }
      }
    }
    if (seed == tris_.size()) {
      for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (alive_[t] && is_ghost(tris_[t]) && contains_point(tris_[t], p)) {
          seed = t;
          break;
        }
      }
    }
    if (seed == tris_.size()) throw DegenerateInput("delaunay_2d: point location failed");

    // Connected component of circumcircle-violating triangles around seed.
    std::unordered_map<std::size_t, bool> in_cavity{{seed, true}};
    std::vector<std::size_t> protect{seed};
    std::vector<std::size_t> cavity{seed};
    for (std::size_t head = 0; head < cavity.size(); ++head) {
      const Triangle t = tris_[cavity[head]];
      for (int e = 0; e < 3; ++e) {
        auto it = edge_owner_.find(key(t[(e + 1) % 3], t[e]));
        if (it == edge_owner_.end() || in_cavity.count(it->second)) continue;
        if (in_circumcircle(tris_[it->second], p)) {
          in_cavity[it->second] = true;
          cavity.push_back(it->second);
        }
      }
    }
    // Repair until the cavity is star-shaped from p (floating-point
    // predicates can disagree near collinear or cocircular input):
    // a boundary edge through p pulls in the triangle beyond it, which
    // contains p and is never removed; any other boundary edge not facing p
    // removes its triangle. Triangles containing p are protected.
    auto inside = [&](std::size_t id) {
      auto it = in_cavity.find(id);
      return it != in_cavity.end() && it->second;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t head = 0; head < cavity.size(); ++head) {
        const std::size_t id = cavity[head];
        if (!inside(id)) continue;
        const Triangle t = tris_[id];
        for (int e = 0; e < 3; ++e) {
          const Index u = t[e], v = t[(e + 1) % 3];
          auto it = edge_owner_.find(key(v, u));
          if (it != edge_owner_.end() && inside(it->second)) continue;
          if (visible(u, v, p)) continue;
          if (on_open_segment(u, v, p) && it != edge_owner_.end()) {
            in_cavity[it->second] = true;
            cavity.push_back(it->second);
            protect.push_back(it->second);
          } else if (std::find(protect.begin(), protect.end(), id) == protect.end()) {
            in_cavity[id] = false;
          } else {
            throw DegenerateInput("delaunay_2d: degenerate cavity");
          }
          changed = true;
          break;
        }
      }
      // Keep only the part connected to the protected triangles.
      std::unordered_map<std::size_t, bool> reach;
      std::vector<std::size_t> stack(protect.begin(), protect.end());
      for (std::size_t id : protect) reach[id] = true;
      while (!stack.empty()) {
        const std::size_t id = stack.back();
        stack.pop_back();
        const Triangle t = tris_[id];
        for (int e = 0; e < 3; ++e) {
          auto it = edge_owner_.find(key(t[(e + 1) % 3], t[e]));
          if (it == edge_owner_.end() || !inside(it->second) || reach.count(it->second)) continue;
          reach[it->second] = true;
          stack.push_back(it->second);
        }
      }
      for (std::size_t id : cavity) {
        if (inside(id) && !reach.count(id)) {
          in_cavity[id] = false;
          changed = true;
        }
      }
    }
    std::sort(cavity.begin(), cavity.end());
    cavity.erase(std::unique(cavity.begin(), cavity.end()), cavity.end());
    std::vector<std::array<Index, 2>> boundary;
    for (std::size_t id : cavity) {
      if (!inside(id)) continue;
      const Triangle& t = tris_[id];
      for (int e = 0; e < 3; ++e) {
        const Index u = t[e], v = t[(e + 1) % 3];
        auto it = edge_owner_.find(key(v, u));
        if (it == edge_owner_.end() || !inside(it->second)) boundary.push_back({u, v});
      }
    }
    for (std::size_t id : cavity) {
      if (inside(id)) kill(id);
    }
    for (const auto& [u, v] : boundary) {
      if (u == kGhost) {
        add({v, pi, kGhost});
      } else if (v == kGhost) {
        add({pi, u, kGhost});
      } else {
        if (orient2d_sign(pts_[u], pts_[v], p) <= 0) {
          throw DegenerateInput("delaunay_2d: degenerate cavity");
        }
        add({u, v, pi});
      }
    }
    if (tris_.size() > 4 * alive_total_ + 64) compact();
  }

  void compact() {
    std::vector<Triangle> kept;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (alive_[t]) kept.push_back(tris_[t]);
    }
    tris_.clear();
    alive_.clear();
    alive_total_ = 0;
    edge_owner_.clear();
    for (const auto& t : kept) add(t);
  }

  std::vector<Point2> pts_;
  std::vector<Triangle> tris_;
  std::vector<bool> alive_;
  std::unordered_map<std::uint64_t, std::size_t> edge_owner_;
  std::size_t last_ = 0;
  std::size_t alive_total_ = 0;
};

inline std::vector<Point2> planar_points(const PointCloud& pc) {
  require(pc.dim() == 2, "delaunay_2d: point cloud must be planar");
  std::vector<Point2> pts(pc.size());
  for (std::size_t i = 0; i < pc.size(); ++i) pts[i] = {pc.coord(i, 0), pc.coord(i, 1)};
  return pts;
}

}  // namespace detail

// Delaunay triangulation of a planar point set. Triangles are
// counter-clockwise, rotated to start at their smallest vertex, and sorted.
// Cocircular ties keep the earlier-inserted configuration.
inline std::vector<Triangle> delaunay_2d(const PointCloud& pc) {
  return detail::BowyerWatson(detail::planar_points(pc)).run();
}

}  // namespace phdim
