#pragma once

#include <numeric>
#include <vector>

#include "phdim/common.hpp"

namespace phdim {

// Disjoint sets with path halving. The root of a merged set is chosen by
// the caller, which is what the elder rule of 0-dimensional persistence
// needs.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Index{0}); }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Attaches root `child` under root `root`.
  void attach(Index child, Index root) { parent_[child] = root; }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace phdim
