#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lineup/metric.hpp"

namespace lineup {

/// A named two-metric construction: the instance where the mechanism's choice is wrong.
struct LowerBoundInstance {
  MetricInstance instance;
  Matching forced_choice;
  double limit{1.0};
};

inline constexpr std::array<std::string_view, 7> kLowerBoundNames{
    "vp-fig2", "pp-k1", "pp-k1-twin", "loc-k1", "loc-k1-twin", "hybrid-fig5", "loc-vp-fig6"};

/// Closed-form cost ratio of the forced choice at the given epsilon.
inline double lower_bound_closed_form(std::string_view name, double eps) {
  if (name == "vp-fig2") return (3.0 - 2.0 * eps) / (1.0 + 2.0 * eps);
  if (name == "pp-k1" || name == "loc-k1") return (3.0 - eps) / (1.0 + eps);
  if (name == "pp-k1-twin" || name == "loc-k1-twin") return (3.0 + eps) / (1.0 - eps);
  if (name == "hybrid-fig5") return (2.0 - eps) / (1.0 + eps / 3.0);
  if (name == "loc-vp-fig6") return (10.0 - eps) / (6.0 + eps);
  throw std::invalid_argument("unknown lower-bound family '" + std::string(name) + "'");
}

/// Candidate 0 is A and candidate 1 is B throughout; every instance lies on a line.
inline LowerBoundInstance lower_bound_instance(std::string_view name, double eps) {
  if (!(eps > 0.0 && eps < 0.125)) throw std::invalid_argument("epsilon must lie in (0, 1/8)");
  const std::string label = std::string(name) + "@eps=" + std::to_string(eps);
  if (name == "vp-fig2") {
    // v_a on A, v_b on B; the plurality-veto winner under voter order (0,1) is A.
    return {MetricInstance::on_line({1.0, 0.0}, {1.0, 0.0}, {eps}, label), Matching{{0}}, 3.0};
  }
  if (name == "pp-k1" || name == "loc-k1") {
    // Voters on B; A is closer to the position.
    return {MetricInstance::on_line({2.0, 2.0}, {0.0, 2.0}, {1.0 - eps}, label), Matching{{0}}, 3.0};
  }
  if (name == "pp-k1-twin" || name == "loc-k1-twin") {
    return {MetricInstance::on_line({0.0, 0.0}, {0.0, 2.0}, {1.0 - eps}, label), Matching{{1}}, 3.0};
  }
  if (name == "hybrid-fig5") {
    // One voter near A's side, two on B.
    const double b = 1.5 - eps / 3.0;
    return {MetricInstance::on_line({0.75 + 2.0 * eps / 3.0, b, b}, {0.0, b}, {0.75 - eps}, label), Matching{{0}},
            2.0};
  }
  if (name == "loc-vp-fig6") {
    return {MetricInstance::on_line({-eps, 2.0}, {-2.0, 2.0}, {0.0}, label), Matching{{0}}, 5.0 / 3.0};
  }
  throw std::invalid_argument("unknown lower-bound family '" + std::string(name) + "'");
}

/// f(x,y) = 1 + 2y / ((x+y)(y/x) + x), bounded by 5/3 on the positive quadrant.
inline double f_bound(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("f_bound needs positive arguments");
  return 1.0 + 2.0 * y / ((x + y) * (y / x) + x);
}

}  // namespace lineup
