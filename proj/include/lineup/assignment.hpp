#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lineup/core.hpp"
#include "lineup/metric.hpp"

namespace lineup {

struct AssignmentResult {
  Matching matching;
  double cost{0.0};
};

namespace detail {

// Shortest augmenting path Hungarian method. weights(c, p) is the cost of
// putting candidate c (column) in position p (row); rows <= columns.
// Only the rows/columns flagged active take part.
inline AssignmentResult hungarian(const Table& weights, const std::vector<bool>& active_rows,
                                  const std::vector<bool>& active_cols) {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t p = 0; p < weights.cols(); ++p) {
    if (active_rows[p]) rows.push_back(p);
  }
  for (std::size_t c = 0; c < weights.rows(); ++c) {
    if (active_cols[c]) cols.push_back(c);
  }
  const std::size_t n = rows.size();
  const std::size_t m = cols.size();
  AssignmentResult result;
  result.matching.assignment.assign(weights.cols(), 0);
  if (n == 0) return result;
  if (n > m) throw std::invalid_argument("more positions than candidates in assignment");

  auto a = [&](std::size_t i, std::size_t j) { return weights(cols[j - 1], rows[i - 1]); };
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInfinity);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = owner[j0];
      double delta = kInfinity;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  for (std::size_t j = 1; j <= m; ++j) {
    if (owner[j] != 0) {
      const std::size_t p = rows[owner[j] - 1];
      const std::size_t c = cols[j - 1];
      result.matching.assignment[p] = c;
      result.cost += weights(c, p);
    }
  }
  return result;
}

}  // namespace detail

/// Exact minimum-weight injective assignment of positions to candidates.
///
/// weights(c, p) is the cost of candidate c in position p. Among all
/// minimizers (within the library tolerance) the lexicographically smallest
/// assignment array is returned, which makes results comparable bit-for-bit
/// with enumeration.
inline AssignmentResult min_cost_assignment(const Table& weights) {
  const std::size_t m = weights.rows();
  const std::size_t l = weights.cols();
  if (l > m) throw std::invalid_argument("more positions than candidates");
  std::vector<bool> rows(l, true), cols(m, true);
  const double optimum = detail::hungarian(weights, rows, cols).cost;

  AssignmentResult result;
  result.matching.assignment.assign(l, 0);
  double fixed = 0.0;
  for (std::size_t p = 0; p < l; ++p) {
    rows[p] = false;
    bool placed = false;
    for (std::size_t c = 0; c < m && !placed; ++c) {
      if (!cols[c]) continue;
      cols[c] = false;
      const double total = fixed + weights(c, p) + detail::hungarian(weights, rows, cols).cost;
      if (approx_le(total, optimum)) {
        result.matching.assignment[p] = c;
        fixed += weights(c, p);
        placed = true;
      } else {
        cols[c] = true;
      }
    }
    if (!placed) throw std::logic_error("lexicographic assignment lost the optimum");
  }
  result.cost = fixed;
  return result;
}

}  // namespace lineup
