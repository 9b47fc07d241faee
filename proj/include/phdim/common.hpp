#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace phdim {

using Index = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute tolerance for equality comparisons between distances and
// filtration values.
inline constexpr double kTolerance = 1e-9;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument values or inputs that fail a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed data: non-square matrices, non-monotone filtrations, etc.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Geometric degeneracy (collinear / duplicate points).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A computation would exceed its configured size budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline bool approx_equal(double a, double b, double tol = kTolerance) {
  return std::abs(a - b) <= tol;
}

}  // namespace phdim
