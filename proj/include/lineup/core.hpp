#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace lineup {

/// Relative tolerance used by every metric and equality check in the library.
inline constexpr double kRelTol = 1e-9;
/// Absolute floor under the relative tolerance.
inline constexpr double kAbsTol = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double tolerance_for(double a, double b) {
  return std::max(kAbsTol, kRelTol * std::max(std::abs(a), std::abs(b)));
}

/// a <= b up to the library tolerance.
inline bool approx_le(double a, double b) { return a <= b + tolerance_for(a, b); }

inline bool approx_eq(double a, double b) { return std::abs(a - b) <= tolerance_for(a, b); }

/// Cost ratio with the zero-cost conventions: 0/0 = 1 and x/0 = +inf for x > 0.
inline double cost_ratio(double numerator, double denominator) {
  if (denominator <= kAbsTol) {
    return numerator <= kAbsTol ? 1.0 : kInfinity;
  }
  return numerator / denominator;
}

/// Raised when an enumeration would exceed its configured size guard.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an information set admits no consistent metric.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of injective maps from l positions into m candidates, saturating at `cap + 1`.
inline std::size_t count_injections(std::size_t m, std::size_t l, std::size_t cap) {
  if (l > m) return 0;
  std::size_t total = 1;
  for (std::size_t i = 0; i < l; ++i) {
    total *= (m - i);
    if (total > cap) return cap + 1;
  }
  return total;
}

}  // namespace lineup
