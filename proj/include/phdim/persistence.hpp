#pragma once

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/filtration.hpp"
#include "phdim/metric.hpp"
#include "phdim/union_find.hpp"

namespace phdim {

struct Interval {
  int degree = 0;
  double birth = 0.0;
  double death = kInfinity;

  bool finite() const { return std::isfinite(death); }
  double length() const { return death - birth; }

  bool operator==(const Interval&) const = default;
  auto operator<=>(const Interval&) const = default;
};

// Multiset of persistence intervals, sorted by (degree, birth, death).
class Barcode {
 public:
  Barcode() = default;
  Barcode(std::vector<Interval> intervals, bool reduced, ComplexKind source)
      : intervals_(std::move(intervals)), reduced_(reduced), source_(source) {
    for (const auto& i : intervals_) {
      if (!(i.death >= i.birth)) throw StructuralError("Barcode: death precedes birth");
    }
    std::sort(intervals_.begin(), intervals_.end());
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool reduced() const { return reduced_; }
  ComplexKind source() const { return source_; }

  std::vector<Interval> degree(int i) const {
    std::vector<Interval> out;
    std::copy_if(intervals_.begin(), intervals_.end(), std::back_inserter(out),
                 [i](const Interval& iv) { return iv.degree == i; });
    return out;
  }

  std::size_t count(int i) const {
    return static_cast<std::size_t>(std::count_if(
        intervals_.begin(), intervals_.end(), [i](const Interval& iv) { return iv.degree == i; }));
  }

  std::size_t count_infinite(int i) const {
    return static_cast<std::size_t>(std::count_if(intervals_.begin(), intervals_.end(), [i](const Interval& iv) {
      return iv.degree == i && !iv.finite();
    }));
  }

  // Lengths of the bounded degree-i intervals.
  std::vector<double> finite_lengths(int i) const {
    std::vector<double> out;
    for (const auto& iv : intervals_) {
      if (iv.degree == i && iv.finite()) out.push_back(iv.length());
    }
    return out;
  }

  int max_degree() const {
    int d = -1;
    for (const auto& iv : intervals_) d = std::max(d, iv.degree);
    return d;
  }

  // Dyadic bucket counts |J_k| with 2^{-k-1} < length <= 2^{-k}, over the
  // positive-length bounded degree-i intervals.
  std::map<int, std::size_t> dyadic_buckets(int i) const {
    std::map<int, std::size_t> buckets;
    for (double len : finite_lengths(i)) {
      if (len <= 0.0) continue;
      int k = static_cast<int>(std::floor(-std::log2(len)));
      // Repair rounding at exact powers of two.
      while (std::ldexp(1.0, -k) < len) --k;
      while (std::ldexp(1.0, -k - 1) >= len) ++k;
      ++buckets[k];
    }
    return buckets;
  }

 private:
  std::vector<Interval> intervals_;
  bool reduced_ = true;
  ComplexKind source_ = ComplexKind::kCustom;
};

enum class ReductionAlgorithm {
  // Anti-transposed (coboundary) reduction in increasing dimension with
  // clearing; degree 0 by union-find.
  kCohomology,
  // Boundary-matrix reduction in decreasing dimension with clearing (twist).
  kTwist,
};

struct PersistenceParams {
  bool reduced = true;
  bool keep_ephemeral = false;
  // Intervals with death - birth <= ephemeral_tolerance * max(1, |death|)
  // are ephemeral; the bound sits far above rounding noise.
  double ephemeral_tolerance = 1e-13;
  ReductionAlgorithm algorithm = ReductionAlgorithm::kCohomology;
};

namespace detail {

// Filtration index lookup for the simplices of one dimension keyed by the
// combinatorial number system code sum_i C(v_i, i + 1).
class SimplexLookup {
 public:
  static constexpr Index kMissing = std::numeric_limits<Index>::max();

  SimplexLookup(std::size_t n, int dim, std::size_t expected) : dim_(dim) {
    binom_.assign(static_cast<std::size_t>(dim) + 2, std::vector<std::uint64_t>(n + 1, 0));
    for (std::size_t k = 0; k <= static_cast<std::size_t>(dim) + 1; ++k) {
      for (std::size_t v = 0; v <= n; ++v) binom_[k][v] = binomial(v, k);
    }
    const double range = binomial_double(n, static_cast<std::size_t>(dim) + 1);
    if (range > 1.8e19) throw BudgetExceeded("simplex codes overflow 64 bits");
    dense_ = range <= static_cast<double>(std::max<std::size_t>(8 * expected, std::size_t{1} << 22));
    if (dense_) table_.assign(static_cast<std::size_t>(range), kMissing);
  }

  std::uint64_t code(std::span<const Index> verts) const {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) c += binom_[i + 1][verts[i]];
    return c;
  }

  void insert(std::span<const Index> verts, Index position) {
    const auto c = code(verts);
    if (dense_) {
      table_[c] = position;
    } else {
      map_[c] = position;
    }
  }

  Index find(std::uint64_t c) const {
    if (dense_) return c < table_.size() ? table_[c] : kMissing;
    auto it = map_.find(c);
    return it == map_.end() ? kMissing : it->second;
  }

  // Filtration index of the facet of `verts` that omits position `skip`.
  Index find_facet(std::span<const Index> verts, std::size_t skip) const {
    std::uint64_t c = 0;
    std::size_t slot = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (i == skip) continue;
      c += binom_[slot + 1][verts[i]];
      ++slot;
    }
    return find(c);
  }

 private:
  static std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    unsigned __int128 r = 1;
    for (std::size_t i = 0; i < k; ++i) {
      r = r * (n - i) / (i + 1);
      if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
  }

  int dim_;
  bool dense_ = false;
  std::vector<std::vector<std::uint64_t>> binom_;
  std::vector<Index> table_;
  std::unordered_map<std::uint64_t, Index> map_;
};

// Facet structure of a filtration: `boundary` lists the facets of every
// simplex of dimension >= 1 (ascending filtration index), checked for
// existence and monotone values.
struct BoundaryStructure {
  std::vector<std::size_t> offset;  // CSR offsets into `facets`, size()+1
  std::vector<Index> facets;

  std::span<const Index> of(std::size_t i) const {
    return {facets.data() + offset[i], offset[i + 1] - offset[i]};
  }
};

inline BoundaryStructure build_boundaries(const Filtration& f) {
  if (!f.is_sorted()) throw StructuralError("filtration is not sorted by (value, dim, vertices)");
  const std::size_t n = f.num_vertices();
  std::vector<std::size_t> per_dim(static_cast<std::size_t>(f.max_dim()) + 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) ++per_dim[static_cast<std::size_t>(f.dim(i))];
  std::vector<SimplexLookup> lookups;
  for (int d = 0; d < f.max_dim(); ++d) lookups.emplace_back(n, d, per_dim[static_cast<std::size_t>(d)]);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int d = f.dim(i);
    if (d < f.max_dim()) lookups[static_cast<std::size_t>(d)].insert(f.vertices(i), static_cast<Index>(i));
  }
  BoundaryStructure bs;
  bs.offset.assign(f.size() + 1, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    total += f.dim(i) > 0 ? static_cast<std::size_t>(f.dim(i)) + 1 : 0;
  }
  bs.facets.reserve(total);
  std::array<Index, 256> buf{};
  for (std::size_t i = 0; i < f.size(); ++i) {
    bs.offset[i] = bs.facets.size();
    const int d = f.dim(i);
    if (d == 0) continue;
    const auto verts = f.vertices(i);
    const auto& lookup = lookups[static_cast<std::size_t>(d) - 1];
    for (std::size_t skip = 0; skip < verts.size(); ++skip) {
      const Index facet = lookup.find_facet(verts, skip);
      if (facet == SimplexLookup::kMissing || facet >= i) {
        throw StructuralError("filtration: a facet is missing or enters after its coface");
      }
      if (f.value(facet) > f.value(i)) throw StructuralError("filtration: values are not monotone");
      buf[skip] = facet;
    }
    std::sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(verts.size()));
    bs.facets.insert(bs.facets.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(verts.size()));
  }
  bs.offset[f.size()] = bs.facets.size();
  return bs;
}

inline void symmetric_difference_into(std::vector<Index>& column, const std::vector<Index>& other,
                                      std::vector<Index>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                std::back_inserter(scratch));
  column.swap(scratch);
}

struct PairCollector {
  const Filtration& f;
  const PersistenceParams& params;
  std::vector<Interval> out;

  void pair(int degree, std::size_t birth, std::size_t death) {
    const double b = f.value(birth), d = f.value(death);
    if (!params.keep_ephemeral && d - b <= params.ephemeral_tolerance * std::max(1.0, std::abs(d))) return;
    out.push_back({degree, b, d});
  }
  void essential(int degree, std::size_t birth) { out.push_back({degree, f.value(birth), kInfinity}); }
};

// Degree 0 by Kruskal-style union-find with the elder rule; marks the edges
// that kill a component.
inline void reduce_degree0(const Filtration& f, const BoundaryStructure& bs, PairCollector& pc,
                           std::vector<bool>& killed) {
  const std::size_t n = f.size();
  UnionFind uf(n);
  Index first_vertex = SimplexLookup::kMissing;
  for (std::size_t i = 0; i < n; ++i) {
    if (f.dim(i) == 0) {
      if (first_vertex == SimplexLookup::kMissing) first_vertex = static_cast<Index>(i);
      continue;
    }
    if (f.dim(i) != 1) continue;
    const auto facets = bs.of(i);
    Index ra = uf.find(facets[0]), rb = uf.find(facets[1]);
    if (ra == rb) continue;
    // Roots are the filtration indices of each component's oldest vertex.
    if (ra > rb) std::swap(ra, rb);
    pc.pair(0, rb, i);
    uf.attach(rb, ra);
    killed[i] = true;
  }
  if (f.max_dim() == 0) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (f.dim(i) != 0 || uf.find(static_cast<Index>(i)) != i) continue;
    if (pc.params.reduced && i == first_vertex) continue;
    pc.essential(0, i);
  }
}

inline std::vector<Interval> reduce_cohomology(const Filtration& f, const PersistenceParams& params) {
  const BoundaryStructure bs = build_boundaries(f);
  PairCollector pc{f, params, {}};
  std::vector<bool> killed(f.size(), false);
  reduce_degree0(f, bs, pc, killed);

  std::vector<Index> pivot_owner(f.size(), SimplexLookup::kMissing);
  std::vector<std::vector<Index>> stored;
  std::vector<Index> column, scratch;
  for (int k = 1; k < f.max_dim(); ++k) {
    // Coboundaries of the k-simplices, ascending because cofaces are
    // visited in filtration order.
    std::vector<std::size_t> offset(f.size() + 1, 0);
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f.dim(j) != k + 1) continue;
      for (Index facet : bs.of(j)) ++offset[facet + 1];
    }
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    std::vector<Index> cofaces(offset.back());
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (f.dim(j) != k + 1) continue;
      for (Index facet : bs.of(j)) cofaces[fill[facet]++] = static_cast<Index>(j);
    }
    std::vector<bool> next_killed(f.size(), false);
    for (std::size_t s = f.size(); s-- > 0;) {
      if (f.dim(static_cast<Index>(s)) != k || killed[s]) continue;
      column.assign(cofaces.begin() + static_cast<std::ptrdiff_t>(offset[s]),
                    cofaces.begin() + static_cast<std::ptrdiff_t>(offset[s + 1]));
      while (!column.empty()) {
        const Index owner = pivot_owner[column.front()];
        if (owner == SimplexLookup::kMissing) break;
        symmetric_difference_into(column, stored[owner], scratch);
      }
      if (column.empty()) {
        pc.essential(k, s);
        continue;
      }
      const Index pivot = column.front();
      pivot_owner[pivot] = static_cast<Index>(stored.size());
      stored.push_back(column);
      next_killed[pivot] = true;
      pc.pair(k, s, pivot);
    }
    killed.swap(next_killed);
    for (auto& col : stored) std::vector<Index>().swap(col);
    stored.clear();
    std::fill(pivot_owner.begin(), pivot_owner.end(), SimplexLookup::kMissing);
  }
  return std::move(pc.out);
}

inline std::vector<Interval> reduce_twist(const Filtration& f, const PersistenceParams& params) {
  const BoundaryStructure bs = build_boundaries(f);
  PairCollector pc{f, params, {}};
  const std::size_t n = f.size();
  // Row index n stands for the augmentation (empty simplex).
  const Index augmentation = static_cast<Index>(n);
  std::vector<Index> low_owner(n + 1, SimplexLookup::kMissing);
  std::vector<bool> cleared(n, false), is_low(n, false), zero(n, false);
  std::vector<std::vector<Index>> reduced(n);
  std::vector<Index> column, scratch;
  for (int d = f.max_dim(); d >= 0; --d) {
    for (std::size_t j = 0; j < n; ++j) {
      if (f.dim(j) != d) continue;
      if (cleared[j]) continue;
      if (d == 0) {
        column.clear();
        if (params.reduced) column.push_back(augmentation);
      } else {
        auto facets = bs.of(j);
        column.assign(facets.begin(), facets.end());
      }
      while (!column.empty()) {
        const Index owner = low_owner[column.back()];
        if (owner == SimplexLookup::kMissing) break;
        symmetric_difference_into(column, reduced[owner], scratch);
      }
      if (column.empty()) {
        zero[j] = true;
        continue;
      }
      const Index low = column.back();
      low_owner[low] = static_cast<Index>(j);
      if (low != augmentation) {
        is_low[low] = true;
        cleared[low] = true;
        pc.pair(d - 1, low, j);
      }
      reduced[j] = column;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (zero[j] && !is_low[j] && f.dim(j) < f.max_dim()) pc.essential(f.dim(j), j);
  }
  return std::move(pc.out);
}

}  // namespace detail

// Persistence barcode of a filtration over Z/2. Essential classes are
// reported for degrees below max_dim only; with `reduced`, degree 0 uses
// reduced homology (k points give k - 1 bounded intervals once connected).
inline Barcode persistent_homology(const Filtration& f, const PersistenceParams& params = {}) {
  std::vector<Interval> intervals = params.algorithm == ReductionAlgorithm::kTwist
                                        ? detail::reduce_twist(f, params)
                                        : detail::reduce_cohomology(f, params);
  return Barcode(std::move(intervals), params.reduced, f.kind());
}

// Number of positive-length bounded reduced PH_0 intervals of the filtration
// of links of v inside the Rips filtration: w enters at d(v, w), the edge
// {w, u} at max(d(v, w), d(v, u), d(w, u)).
inline std::size_t link_ph0_count(const FiniteMetricSpace& fms, std::size_t v,
                                  double tol = kTolerance) {
  require(v < fms.size(), "link_ph0_count: vertex out of range");
  std::vector<Index> members;
  for (std::size_t w = 0; w < fms.size(); ++w) {
    if (w != v) members.push_back(static_cast<Index>(w));
  }
  // Elder rule order: birth, then index.
  std::sort(members.begin(), members.end(), [&](Index a, Index b) {
    return fms(v, a) < fms(v, b) || (fms(v, a) == fms(v, b) && a < b);
  });
  const std::size_t m = members.size();
  if (m < 2) return 0;
  std::vector<double> birth(m);
  for (std::size_t i = 0; i < m; ++i) birth[i] = fms(v, members[i]);
  struct Edge {
    double value;
    Index a, b;  // ranks in `members`
  };
  std::vector<Edge> edges;
  edges.reserve(m * (m - 1) / 2);
  for (Index a = 0; a < m; ++a) {
    for (Index b = a + 1; b < m; ++b) {
      const double value = std::max({birth[a], birth[b], fms(members[a], members[b])});
      edges.push_back({value, a, b});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.value < y.value || (x.value == y.value && (x.a < y.a || (x.a == y.a && x.b < y.b)));
  });
  UnionFind uf(m);
  std::size_t count = 0;
  for (const auto& e : edges) {
    Index ra = uf.find(e.a), rb = uf.find(e.b);
    if (ra == rb) continue;
    if (ra > rb) std::swap(ra, rb);  // lower rank is elder
    if (e.value - birth[rb] > tol) ++count;
    uf.attach(rb, ra);
  }
  return count;
}

}  // namespace phdim
