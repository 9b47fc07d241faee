#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/persistence.hpp"

namespace phdim {

namespace detail {

// Hopcroft-Karp maximum matching on a bipartite graph with `left` and
// `right` vertex counts.
class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t left, std::size_t right)
      : adj_(left), match_left_(left, kFree), match_right_(right, kFree), dist_(left) {}

  void add_edge(std::size_t u, std::size_t v) { adj_[u].push_back(v); }

  std::size_t max_matching() {
    std::size_t size = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < adj_.size(); ++u) {
        if (match_left_[u] == kFree && dfs(u)) ++size;
      }
    }
    return size;
  }

 private:
  static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (match_left_[u] == kFree) {
        dist_[u] = 0;
        q.push(u);
      } else {
        dist_[u] = kInf;
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj_[u]) {
        const std::size_t w = match_right_[v];
        if (w == kFree) {
          found = true;
        } else if (dist_[w] == kInf) {
          dist_[w] = dist_[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      const std::size_t w = match_right_[v];
      if (w == kFree || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    dist_[u] = kInf;
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_, match_right_;
  std::vector<std::size_t> dist_;
};

inline double linf(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

inline double diagonal_cost(const Interval& a) { return (a.death - a.birth) / 2.0; }

// Perfect matching on A + diag(B) vs B + diag(A) using only pairs of cost
// <= t.
inline bool matching_feasible(const std::vector<Interval>& a, const std::vector<Interval>& b, double t) {
  const std::size_t na = a.size(), nb = b.size();
  HopcroftKarp hk(na + nb, nb + na);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (linf(a[i], b[j]) <= t) hk.add_edge(i, j);
    }
    if (diagonal_cost(a[i]) <= t) hk.add_edge(i, nb + i);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (diagonal_cost(b[j]) <= t) hk.add_edge(na + j, j);
    for (std::size_t i = 0; i < na; ++i) hk.add_edge(na + j, nb + i);
  }
  return hk.max_matching() == na + nb;
}

}  // namespace detail

// Exact bottleneck distance between the degree-i parts of two barcodes.
// Infinite intervals must pair with each other (sorted by birth); if their
// counts differ the distance is infinite and InvalidArgument is thrown.
inline double bottleneck_distance(const Barcode& x, const Barcode& y, int degree) {
  std::vector<Interval> a, b;
  std::vector<double> inf_a, inf_b;
  for (const auto& iv : x.degree(degree)) {
    if (iv.finite()) a.push_back(iv); else inf_a.push_back(iv.birth);
  }
  for (const auto& iv : y.degree(degree)) {
    if (iv.finite()) b.push_back(iv); else inf_b.push_back(iv.birth);
  }
  if (inf_a.size() != inf_b.size()) {
    throw InvalidArgument("bottleneck_distance: infinite interval counts differ (no finite distance)");
  }
  std::sort(inf_a.begin(), inf_a.end());
  std::sort(inf_b.begin(), inf_b.end());
  double essential = 0.0;
  for (std::size_t k = 0; k < inf_a.size(); ++k) essential = std::max(essential, std::abs(inf_a[k] - inf_b[k]));

  std::vector<double> candidates{0.0};
  for (const auto& p : a) candidates.push_back(detail::diagonal_cost(p));
  for (const auto& q : b) candidates.push_back(detail::diagonal_cost(q));
  for (const auto& p : a) {
    for (const auto& q : b) candidates.push_back(detail::linf(p, q));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  // Smallest feasible candidate; the largest is always feasible.
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (detail::matching_feasible(a, b, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return std::max(essential, candidates[lo]);
}

}  // namespace phdim
