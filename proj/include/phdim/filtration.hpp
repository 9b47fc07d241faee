#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/delaunay.hpp"
#include "phdim/geometry.hpp"
#include "phdim/metric.hpp"
#include "phdim/random.hpp"

namespace phdim {

enum class ComplexKind { kRips, kCech, kAlpha2d, kCustom };

inline std::string_view complex_name(ComplexKind k) {
  switch (k) {
    case ComplexKind::kRips: return "rips";
    case ComplexKind::kCech: return "cech";
    case ComplexKind::kAlpha2d: return "alpha2d";
    case ComplexKind::kCustom: return "custom";
  }
  return "?";
}

inline ComplexKind parse_complex(std::string_view name) {
  for (ComplexKind k : {ComplexKind::kRips, ComplexKind::kCech, ComplexKind::kAlpha2d,
                        ComplexKind::kCustom}) {
    if (complex_name(k) == name) return k;
  }
  throw InvalidArgument("unknown complex kind '" + std::string(name) + "'");
}

inline constexpr std::size_t kDefaultSimplexBudget = 50'000'000;

// Simplices sorted by (value, dim, lexicographic vertex tuple), stored as
// parallel arrays with a fixed vertex stride of max_dim + 1.
class Filtration {
 public:
  Filtration(ComplexKind kind, int max_dim, std::size_t num_vertices)
      : kind_(kind), max_dim_(max_dim), num_vertices_(num_vertices) {
    require(max_dim >= 0 && max_dim < 255, "Filtration: max_dim out of range");
  }

  ComplexKind kind() const { return kind_; }
  int max_dim() const { return max_dim_; }
  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double value(std::size_t i) const { return values_[i]; }
  int dim(std::size_t i) const { return dims_[i]; }
  std::span<const Index> vertices(std::size_t i) const {
    return {vertices_.data() + i * stride(), static_cast<std::size_t>(dims_[i]) + 1};
  }

  std::size_t count(int d) const {
    return static_cast<std::size_t>(
        std::count(dims_.begin(), dims_.end(), static_cast<std::uint8_t>(d)));
  }

  void reserve(std::size_t n) {
    values_.reserve(n);
    dims_.reserve(n);
    vertices_.reserve(n * stride());
  }

  // Appends a simplex; call sort() once all simplices are added.
  void add(std::span<const Index> verts, double value) {
    require(!verts.empty() && verts.size() <= stride(), "Filtration: simplex dimension out of range");
    for (std::size_t k = 0; k < verts.size(); ++k) {
      require(verts[k] < num_vertices_, "Filtration: vertex index out of range");
      if (k > 0 && verts[k] <= verts[k - 1]) {
        throw StructuralError("Filtration: vertex tuples must be strictly increasing");
      }
    }
    require(std::isfinite(value) && value >= 0.0, "Filtration: values must be finite and nonnegative");
    values_.push_back(value);
    dims_.push_back(static_cast<std::uint8_t>(verts.size() - 1));
    vertices_.insert(vertices_.end(), verts.begin(), verts.end());
    vertices_.insert(vertices_.end(), stride() - verts.size(), kNoVertex);
  }

  void add(std::initializer_list<Index> verts, double value) {
    add(std::span<const Index>(verts.begin(), verts.size()), value);
  }

  void sort() {
    std::vector<Index> order(size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return precedes(a, b); });
    std::vector<double> values(size());
    std::vector<std::uint8_t> dims(size());
    std::vector<Index> verts(vertices_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      values[i] = values_[order[i]];
      dims[i] = dims_[order[i]];
      std::copy_n(vertices_.begin() + order[i] * stride(), stride(),
                  verts.begin() + i * stride());
    }
    values_ = std::move(values);
    dims_ = std::move(dims);
    vertices_ = std::move(verts);
  }

  bool is_sorted() const {
    for (std::size_t i = 1; i < size(); ++i) {
      if (precedes(static_cast<Index>(i), static_cast<Index>(i - 1))) return false;
    }
    return true;
  }

  // One simplex per line: `value,dim,v0 v1 ... vk`.
  void dump(std::ostream& out) const {
    for (std::size_t i = 0; i < size(); ++i) {
      out << format_double(value(i)) << ',' << dim(i) << ',';
      auto vs = vertices(i);
      for (std::size_t k = 0; k < vs.size(); ++k) out << (k ? " " : "") << vs[k];
      out << '\n';
    }
  }

  static Filtration parse_dump(std::istream& in, ComplexKind kind = ComplexKind::kCustom) {
    struct Row {
      double value;
      std::vector<Index> verts;
    };
    std::vector<Row> rows;
    int max_dim = 0;
    Index max_vertex = 0;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) {
        throw StructuralError("filtration dump: malformed line '" + line + "'");
      }
      Row row{parse_double(std::string_view(line).substr(0, c1)), {}};
      std::istringstream vs(line.substr(c2 + 1));
      long long v = 0;
      while (vs >> v) {
        if (v < 0) throw StructuralError("filtration dump: negative vertex");
        row.verts.push_back(static_cast<Index>(v));
        max_vertex = std::max(max_vertex, static_cast<Index>(v));
      }
      const int d = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
      if (row.verts.empty() || static_cast<int>(row.verts.size()) != d + 1) {
        throw StructuralError("filtration dump: dimension does not match vertex count");
      }
      max_dim = std::max(max_dim, d);
      rows.push_back(std::move(row));
    }
    Filtration f(kind, max_dim, rows.empty() ? 0 : max_vertex + 1);
    for (const auto& r : rows) f.add(r.verts, r.value);
    f.sort();
    return f;
  }

 private:
  static constexpr Index kNoVertex = std::numeric_limits<Index>::max();

  std::size_t stride() const { return static_cast<std::size_t>(max_dim_) + 1; }

  bool precedes(Index a, Index b) const {
    if (values_[a] != values_[b]) return values_[a] < values_[b];
    if (dims_[a] != dims_[b]) return dims_[a] < dims_[b];
    auto va = vertices(a), vb = vertices(b);
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
  }

  ComplexKind kind_;
  int max_dim_;
  std::size_t num_vertices_;
  std::vector<double> values_;
  std::vector<std::uint8_t> dims_;
  std::vector<Index> vertices_;
};

struct FiltrationParams {
  int max_dim = 2;
  double max_scale = kInfinity;
  std::size_t budget = kDefaultSimplexBudget;
};

namespace detail {

inline double binomial_double(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

inline void check_full_budget(std::size_t n, int max_dim, std::size_t budget) {
  double total = 0.0;
  for (int k = 0; k <= max_dim; ++k) total += binomial_double(n, static_cast<std::size_t>(k) + 1);
  if (total > static_cast<double>(budget)) {
    throw BudgetExceeded("filtration would contain " + std::to_string(static_cast<long double>(total)) +
                         " simplices, budget is " + std::to_string(budget));
  }
}

// Enumerates every vertex subset of size <= max_dim + 1 accepted by
// `extend`, which maps (parent value, parent vertices, new vertex) to the
// child's value or a negative number to reject it. Subsets are grown in
// increasing vertex order, so rejection prunes all supersets.
template <typename Extend>
Filtration expand_complex(ComplexKind kind, std::size_t n, const FiltrationParams& params,
                          Extend&& extend) {
  require(params.max_dim >= 0, "filtration: max_dim must be >= 0");
  require(params.max_scale > 0.0, "filtration: max_scale must be positive");
  if (std::isinf(params.max_scale)) check_full_budget(n, params.max_dim, params.budget);
  Filtration f(kind, params.max_dim, n);
  std::vector<Index> verts;
  std::size_t produced = 0;
  auto emit = [&](double value) {
    if (++produced > params.budget) {
      throw BudgetExceeded("filtration exceeds the simplex budget of " + std::to_string(params.budget));
    }
    f.add(verts, value);
  };
  auto recurse = [&](auto&& self, double value) -> void {
    if (static_cast<int>(verts.size()) > params.max_dim) return;
    for (Index c = verts.back() + 1; c < n; ++c) {
      const double v = extend(value, std::span<const Index>(verts), c);
      if (v < 0.0 || v > params.max_scale) continue;
      verts.push_back(c);
      emit(v);
      self(self, v);
      verts.pop_back();
    }
  };
  for (Index v = 0; v < n; ++v) {
    verts.assign(1, v);
    emit(0.0);
    recurse(recurse, 0.0);
  }
  f.sort();
  return f;
}

}  // namespace detail

// Vietoris-Rips: a simplex enters at the largest pairwise distance among its
// vertices.
inline Filtration rips_filtration(const FiniteMetricSpace& fms, const FiltrationParams& params = {}) {
  return detail::expand_complex(
      ComplexKind::kRips, fms.size(), params,
      [&](double value, std::span<const Index> verts, Index c) {
        double v = value;
        for (Index u : verts) v = std::max(v, fms(u, c));
        return v;
      });
}

// Cech: a simplex enters at the radius of the minimal enclosing ball of its
// vertices.
inline Filtration cech_filtration(const PointCloud& pc, const FiltrationParams& params = {}) {
  require(params.max_dim <= 3, "cech_filtration: max_dim must be <= 3");
  require(pc.dim() <= kMaxBallDim, "cech_filtration: ambient dimension must be <= 8");
  std::array<Index, 5> buf{};
  return detail::expand_complex(
      ComplexKind::kCech, pc.size(), params,
      [&](double value, std::span<const Index> verts, Index c) {
        if (verts.size() == 1) return euclidean_distance(pc.point(verts[0]), pc.point(c)) / 2.0;
        if (verts.size() == 2) {
          return std::max(value, triangle_enclosing_radius(pc.point(verts[0]), pc.point(verts[1]),
                                                           pc.point(c)));
        }
        std::copy(verts.begin(), verts.end(), buf.begin());
        buf[verts.size()] = c;
        // verts.size() == 3: the facets through c are clamped in as well.
        double v = std::max(value, minimal_enclosing_ball_radius(
                                       pc, std::span<const Index>(buf.data(), verts.size() + 1)));
        for (std::size_t a = 0; a < 3; ++a) {
          for (std::size_t b = a + 1; b < 3; ++b) {
            v = std::max(v, triangle_enclosing_radius(pc.point(verts[a]), pc.point(verts[b]), pc.point(c)));
          }
        }
        return v;
      });
}

struct AlphaParams {
  // Cocircular Delaunay configurations are jittered by
  // jitter_scale * diameter with a seeded uniform offset per coordinate.
  bool jitter_degenerate = true;
  double jitter_scale = 1e-9;
  std::uint64_t jitter_seed = 0;
};

namespace detail {

// True iff two adjacent Delaunay triangles are exactly cocircular.
inline bool has_cocircular_quad(const PointCloud& pc, const std::vector<Triangle>& tris) {
  std::unordered_map<std::uint64_t, Index> opposite;
  auto key = [](Index a, Index b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) opposite[key(t[e], t[(e + 1) % 3])] = t[(e + 2) % 3];
  }
  for (const auto& t : tris) {
    for (int e = 0; e < 3; ++e) {
      auto it = opposite.find(key(t[(e + 1) % 3], t[e]));
      if (it == opposite.end()) continue;
      const Point2 a{pc.coord(t[0], 0), pc.coord(t[0], 1)};
      const Point2 b{pc.coord(t[1], 0), pc.coord(t[1], 1)};
      const Point2 c{pc.coord(t[2], 0), pc.coord(t[2], 1)};
      const Point2 d{pc.coord(it->second, 0), pc.coord(it->second, 1)};
      if (incircle_sign(a, b, c, d) == 0) return true;
    }
  }
  return false;
}

inline PointCloud jittered(const PointCloud& pc, double magnitude, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> coords = pc.coords();
  for (double& c : coords) c += rng.uniform(-magnitude, magnitude);
  return PointCloud(pc.dim(), std::move(coords));
}

inline double bounding_diameter(const PointCloud& pc) {
  double s = 0.0;
  for (std::size_t k = 0; k < pc.dim(); ++k) {
    double lo = kInfinity, hi = -kInfinity;
    for (std::size_t i = 0; i < pc.size(); ++i) {
      lo = std::min(lo, pc.coord(i, k));
      hi = std::max(hi, pc.coord(i, k));
    }
    s += (hi - lo) * (hi - lo);
  }
  return std::sqrt(s);
}

}  // namespace detail

// Planar alpha filtration on the Delaunay triangulation: triangles at their
// circumradius, an edge at half its length if its diametral disk contains
// no opposite vertex (Gabriel) and otherwise at the smallest incident
// circumradius, vertices at 0.
inline Filtration alpha_filtration_2d(const PointCloud& input, const AlphaParams& params = {}) {
  require(input.dim() == 2, "alpha_filtration_2d: point cloud must be planar");
  PointCloud pc = input;
  std::vector<Triangle> tris = delaunay_2d(pc);
  if (params.jitter_degenerate && detail::has_cocircular_quad(pc, tris)) {
    pc = detail::jittered(input, params.jitter_scale * detail::bounding_diameter(input),
                          derive_seed(params.jitter_seed, "alpha-jitter"));
    tris = delaunay_2d(pc);
  }
  auto pt = [&](Index i) { return Point2{pc.coord(i, 0), pc.coord(i, 1)}; };

  struct EdgeInfo {
    Index a, b;
    double value;
  };
  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  std::vector<EdgeInfo> edges;
  auto edge_key = [](Index a, Index b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::vector<double> tri_value(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    tri_value[t] = circumradius_2d(pt(tri[0]), pt(tri[1]), pt(tri[2]));
    for (int e = 0; e < 3; ++e) {
      const Index a = std::min(tri[e], tri[(e + 1) % 3]);
      const Index b = std::max(tri[e], tri[(e + 1) % 3]);
      const Index opp = tri[(e + 2) % 3];
      auto [it, inserted] = edge_index.try_emplace(edge_key(a, b), edges.size());
      if (inserted) {
        const double half = euclidean_distance(pc.point(a), pc.point(b)) / 2.0;
        edges.push_back({a, b, half});
      }
      EdgeInfo& info = edges[it->second];
      const Point2 pa = pt(a), pb = pt(b), po = pt(opp);
      const Point2 mid{(pa.x + pb.x) / 2.0, (pa.y + pb.y) / 2.0};
      const double half_sq = ((pa.x - pb.x) * (pa.x - pb.x) + (pa.y - pb.y) * (pa.y - pb.y)) / 4.0;
      const double opp_sq = (po.x - mid.x) * (po.x - mid.x) + (po.y - mid.y) * (po.y - mid.y);
      // Non-Gabriel edges are flagged with a negative value until the
      // incident circumradii are known.
      if (opp_sq < half_sq * (1.0 - 1e-12)) info.value = -1.0;
    }
  }
  std::vector<double> min_incident(edges.size(), kInfinity);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    for (int e = 0; e < 3; ++e) {
      const std::size_t id = edge_index[edge_key(tri[e], tri[(e + 1) % 3])];
      min_incident[id] = std::min(min_incident[id], tri_value[t]);
    }
  }
  Filtration f(ComplexKind::kAlpha2d, 2, pc.size());
  f.reserve(pc.size() + edges.size() + tris.size());
  for (Index v = 0; v < pc.size(); ++v) f.add({v}, 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double value = edges[e].value < 0.0 ? min_incident[e] : edges[e].value;
    f.add({edges[e].a, edges[e].b}, value);
  }
  for (std::size_t t = 0; t < tris.size(); ++t) {
    std::array<Index, 3> v = tris[t];
    std::sort(v.begin(), v.end());
    // Near-right triangles: rounding must not put a face below an edge.
    double value = tri_value[t];
    for (int e = 0; e < 3; ++e) {
      const std::size_t id = edge_index[edge_key(v[e], v[(e + 1) % 3])];
      value = std::max(value, edges[id].value < 0.0 ? min_incident[id] : edges[id].value);
    }
    f.add(v, value);
  }
  f.sort();
  return f;
}

}  // namespace phdim
