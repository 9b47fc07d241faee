#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "phdim/common.hpp"
#include "phdim/regression.hpp"

namespace phdim {

enum class DimensionMethod { kBox, kPh, kMst, kPhComplexity };

inline std::string_view method_name(DimensionMethod m) {
  switch (m) {
    case DimensionMethod::kBox: return "box";
    case DimensionMethod::kPh: return "ph";
    case DimensionMethod::kMst: return "mst";
    case DimensionMethod::kPhComplexity: return "ph-complexity";
  }
  return "?";
}

inline DimensionMethod parse_method(std::string_view s) {
  for (auto m : {DimensionMethod::kBox, DimensionMethod::kPh, DimensionMethod::kMst,
                 DimensionMethod::kPhComplexity}) {
    if (method_name(m) == s) return m;
  }
  throw InvalidArgument("unknown dimension method '" + std::string(s) + "'");
}

struct DiagnosticRow {
  double alpha = std::numeric_limits<double>::quiet_NaN();  // NaN when not applicable
  double scale = 0.0;      // box size delta, sample size n, or tail threshold
  double statistic = 0.0;  // N_delta, E_alpha, F(eps), ...
  double fitted = 0.0;     // regression prediction of the statistic
};

// One point of the beta(alpha) curve: slope of log E_alpha against log n.
struct ExponentRow {
  double alpha = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double implied_dimension = 0.0;  // alpha / (1 - slope)
  bool in_window = false;
};

struct DimensionEstimate {
  double estimate = 0.0;
  DimensionMethod method = DimensionMethod::kBox;
  int degree = -1;
  std::vector<DiagnosticRow> diagnostics;
  std::vector<ExponentRow> exponent_curve;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double slope = 0.0;  // box: log-log slope; power-law methods: unused
  double slope_stderr = 0.0;
  bool degenerate = false;
  std::string note;
};

inline constexpr double kBetaWindowLo = 0.2;
inline constexpr double kBetaWindowHi = 0.8;

// Inverts E_alpha(x_n) ~ n^{(d - alpha)/d}: per alpha, beta is the log-log
// slope of E_alpha against n and d = alpha / (1 - beta); the estimate is the
// mean of d over the alphas whose beta lies in [0.2, 0.8].
// `values[a][s]` holds E_{alpha_grid[a]} at sizes[s]; nonpositive entries
// are skipped.
inline DimensionEstimate invert_power_law(const std::vector<double>& sizes,
                                          const std::vector<double>& alpha_grid,
                                          const std::vector<std::vector<double>>& values,
                                          DimensionMethod method, int degree) {
  DimensionEstimate est;
  est.method = method;
  est.degree = degree;
  est.window_lo = kBetaWindowLo;
  est.window_hi = kBetaWindowHi;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
    std::vector<double> lx, ly, kept_sizes;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      if (values[a][s] > 0.0 && std::isfinite(values[a][s])) {
        lx.push_back(std::log(sizes[s]));
        ly.push_back(std::log(values[a][s]));
        kept_sizes.push_back(sizes[s]);
      }
    }
    if (lx.size() < 2) continue;
    LinearFit fit;
    try {
      fit = least_squares(lx, ly);
    } catch (const DegenerateInput&) {
      continue;
    }
    ExponentRow row;
    row.alpha = alpha_grid[a];
    row.slope = fit.slope;
    row.slope_stderr = fit.slope_stderr;
    row.implied_dimension = fit.slope < 1.0 ? alpha_grid[a] / (1.0 - fit.slope) : kInfinity;
    row.in_window = fit.slope >= kBetaWindowLo && fit.slope <= kBetaWindowHi;
    if (row.in_window) {
      sum += row.implied_dimension;
      ++used;
    }
    est.exponent_curve.push_back(row);
    for (std::size_t s = 0; s < kept_sizes.size(); ++s) {
      est.diagnostics.push_back({alpha_grid[a], kept_sizes[s], std::exp(ly[s]),
                                 std::exp(fit.intercept + fit.slope * lx[s])});
    }
  }
  if (est.exponent_curve.empty()) {
    est.degenerate = true;
    est.estimate = 0.0;
    est.note = "no positive statistics at two or more sizes";
    return est;
  }
  if (used == 0) {
    // No slope inside the window: fall back to every slope in (0, 1).
    est.degenerate = true;
    est.note = "no beta(alpha) inside [0.2, 0.8]; averaged over beta in (0, 1)";
    for (const auto& row : est.exponent_curve) {
      if (row.slope > 0.0 && row.slope < 1.0) {
        sum += row.implied_dimension;
        ++used;
      }
    }
  }
  est.estimate = used ? sum / static_cast<double>(used) : 0.0;
  return est;
}

}  // namespace phdim
