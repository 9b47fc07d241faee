#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "phdim/common.hpp"

namespace phdim {

// Finite ordered list of points in R^m, stored row-major.
class PointCloud {
 public:
  PointCloud(std::size_t ambient_dim, std::vector<double> coords)
      : dim_(ambient_dim), coords_(std::move(coords)) {
    require(dim_ > 0, "PointCloud: ambient dimension must be positive");
    require(!coords_.empty(), "PointCloud: at least one point is required");
    require(coords_.size() % dim_ == 0,
            "PointCloud: coordinate count is not a multiple of the dimension");
    for (double c : coords_) {
      require(std::isfinite(c), "PointCloud: coordinates must be finite");
    }
  }

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows) {
    require(!rows.empty(), "PointCloud: at least one point is required");
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (const auto& row : rows) {
      require(row.size() == dim, "PointCloud: ragged coordinate rows");
      coords.insert(coords.end(), row.begin(), row.end());
    }
    return PointCloud(dim, std::move(coords));
  }

  std::size_t size() const { return coords_.size() / dim_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double coord(std::size_t i, std::size_t axis) const {
    return coords_[i * dim_ + axis];
  }
  const std::vector<double>& coords() const { return coords_; }

  PointCloud subset(std::span<const Index> indices) const {
    std::vector<double> out;
    out.reserve(indices.size() * dim_);
    for (Index i : indices) {
      auto p = point(i);
      out.insert(out.end(), p.begin(), p.end());
    }
    return PointCloud(dim_, std::move(out));
  }

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double euclidean_distance(std::span<const double> a,
                                 std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

// Symmetric distance matrix over n points. `validated()` is set only by
// validate_metric (or by construction from a point cloud).
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::size_t n, std::vector<double> dist)
      : n_(n), dist_(std::move(dist)) {
    if (n_ == 0 || dist_.size() != n_ * n_) {
      throw StructuralError("FiniteMetricSpace: matrix must be n x n with n >= 1");
    }
  }

  static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
      if (row.size() != n) {
        throw StructuralError("FiniteMetricSpace: matrix is not square");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return FiniteMetricSpace(n, std::move(flat));
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t j, std::size_t k) const { return dist_[j * n_ + k]; }
  double& at(std::size_t j, std::size_t k) {
    validated_ = false;
    return dist_[j * n_ + k];
  }
  const std::vector<double>& data() const { return dist_; }

  bool validated() const { return validated_; }
  void set_validated(bool v) { validated_ = v; }

  double diameter() const {
    double d = 0.0;
    for (double x : dist_) d = std::max(d, x);
    return d;
  }

 private:
  std::size_t n_;
  std::vector<double> dist_;
  bool validated_ = false;
};

inline FiniteMetricSpace distance_matrix(const PointCloud& pc) {
  const std::size_t n = pc.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double v = euclidean_distance(pc.point(j), pc.point(k));
      d[j * n + k] = v;
      d[k * n + j] = v;
    }
  }
  FiniteMetricSpace fms(n, std::move(d));
  fms.set_validated(true);
  return fms;
}

struct MetricViolation {
  enum class Kind { kNonFinite, kDiagonal, kNegative, kSymmetry, kTriangle };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::kNonFinite: os << "non-finite distance at (" << i << "," << j << ")"; break;
      case Kind::kDiagonal: os << "nonzero diagonal at " << i; break;
      case Kind::kNegative: os << "negative distance at (" << i << "," << j << ")"; break;
      case Kind::kSymmetry: os << "symmetry violation at (" << i << "," << j << ")"; break;
      case Kind::kTriangle:
        os << "triangle inequality violated: d(" << i << "," << k << ") > d(" << i
           << "," << j << ") + d(" << j << "," << k << ")";
        break;
    }
    return os.str();
  }
};

struct MetricValidationReport {
  std::vector<MetricViolation> violations;
  // Off-diagonal zeros: legal as a pseudometric but usually duplicated points.
  std::vector<std::pair<std::size_t, std::size_t>> zero_distance_warnings;

  bool ok() const { return violations.empty(); }
};

// Checks every metric axiom (the triangle inequality only when asked, since
// it is cubic) and sets the validated flag iff no violation was found.
inline MetricValidationReport validate_metric(FiniteMetricSpace& fms,
                                              bool check_triangle,
                                              double tol = kTolerance) {
  using Kind = MetricViolation::Kind;
  MetricValidationReport report;
  const std::size_t n = fms.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (fms(j, j) != 0.0) report.violations.push_back({Kind::kDiagonal, j, j, 0});
    for (std::size_t k = 0; k < n; ++k) {
      const double d = fms(j, k);
      if (!std::isfinite(d)) {
        report.violations.push_back({Kind::kNonFinite, j, k, 0});
        continue;
      }
      if (d < 0.0) report.violations.push_back({Kind::kNegative, j, k, 0});
      if (k > j) {
        if (!approx_equal(d, fms(k, j), tol)) {
          report.violations.push_back({Kind::kSymmetry, j, k, 0});
        }
        if (d == 0.0) report.zero_distance_warnings.emplace_back(j, k);
      }
    }
  }
  if (check_triangle && report.violations.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        const double direct = fms(i, k);
        for (std::size_t j = 0; j < n; ++j) {
          if (direct > fms(i, j) + fms(j, k) + tol) {
            report.violations.push_back({Kind::kTriangle, i, j, k});
          }
        }
      }
    }
  }
  fms.set_validated(report.ok());
  return report;
}

inline double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  require(a.dim() == b.dim(), "hausdorff_distance: dimension mismatch");
  auto directed = [](const PointCloud& from, const PointCloud& to) {
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      double best = kInfinity;
      for (std::size_t j = 0; j < to.size() && best > worst; ++j) {
        best = std::min(best, squared_distance(from.point(i), to.point(j)));
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

// Greedy maximal packing in input order: a point is kept iff it is farther
// than eps/2 from every kept point, so the closed eps/4-balls around kept
// points are disjoint and every point lies within eps/2 of the net.
template <typename Distance>
std::vector<Index> greedy_net(std::size_t n, double eps, Distance&& dist) {
  require(eps > 0.0, "epsilon_net: eps must be positive");
  const double radius = eps / 2.0;
  std::vector<Index> kept;
  for (std::size_t i = 0; i < n; ++i) {
    bool far = true;
    for (Index k : kept) {
      if (dist(i, k) <= radius) {
        far = false;
        break;
      }
    }
    if (far) kept.push_back(static_cast<Index>(i));
  }
  return kept;
}

inline std::vector<Index> epsilon_net(const PointCloud& pc, double eps) {
  return greedy_net(pc.size(), eps, [&](std::size_t i, std::size_t k) {
    return euclidean_distance(pc.point(i), pc.point(k));
  });
}

inline std::vector<Index> epsilon_net(const FiniteMetricSpace& fms, double eps) {
  return greedy_net(fms.size(), eps,
                    [&](std::size_t i, std::size_t k) { return fms(i, k); });
}

// ---------------------------------------------------------------------------
// CSV

// Shortest round-trip representation; `inf` for infinity.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s == "inf" || s == "+inf") return kInfinity;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline PointCloud read_point_cloud_csv(std::istream& in) {
  return PointCloud::from_rows(read_csv_rows(in));
}

inline FiniteMetricSpace read_metric_csv(std::istream& in) {
  return FiniteMetricSpace::from_rows(read_csv_rows(in));
}

inline void write_point_cloud_csv(std::ostream& out, const PointCloud& pc) {
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (std::size_t k = 0; k < pc.dim(); ++k) {
      if (k) out << ',';
      out << format_double(pc.coord(i, k));
    }
    out << '\n';
  }
}

inline void write_metric_csv(std::ostream& out, const FiniteMetricSpace& fms) {
  for (std::size_t j = 0; j < fms.size(); ++j) {
    for (std::size_t k = 0; k < fms.size(); ++k) {
      if (k) out << ',';
      out << format_double(fms(j, k));
    }
    out << '\n';
  }
}

}  // namespace phdim
