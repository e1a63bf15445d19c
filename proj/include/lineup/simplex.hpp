#pragma once

// Dense two-phase tableau simplex with Bland's rule, plus an exact rational
// re-check of the final basis.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lineup::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  std::size_t var;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense{Sense::LessEqual};
  double rhs{0.0};
};

/// maximize objective . x  subject to rows, x >= 0.
struct Problem {
  std::size_t n_vars{0};
  std::vector<double> objective;
  std::vector<Constraint> rows;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "?";
}

struct Options {
  double eps{1e-9};
  std::size_t max_pivots{200000};
  /// Recompute the final basis in exact rational arithmetic.
  bool rational_check{false};
};

struct RationalCheck {
  bool primal_feasible{false};
  bool dual_feasible{false};
  double value{0.0};

  bool certified() const { return primal_feasible && dual_feasible; }
};

struct Solution {
  Status status{Status::Infeasible};
  double value{0.0};
  std::vector<double> x;
  std::size_t pivots{0};
  std::optional<RationalCheck> exact;
};

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

// Column layout: structural [0, n), one slack per inequality row, one
// artificial per row lacking a +1 slack. Rows are sign-normalized so rhs >= 0.
struct Standardized {
  std::size_t n_struct{0};
  std::size_t n_cols{0};
  std::size_t first_artificial{0};
  std::vector<std::vector<double>> a;  // rows x n_cols
  std::vector<double> b;
  std::vector<std::size_t> basis;      // initial basic column per row
  std::vector<std::size_t> slack_of;   // slack column of row, or npos
  std::vector<double> slack_sign;      // coefficient of the slack in its row (+1/-1)
  std::vector<std::size_t> artificial_of;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

inline Standardized standardize(const Problem& problem) {
  Standardized s;
  s.n_struct = problem.n_vars;
  const std::size_t rows = problem.rows.size();
  std::size_t n_slack = 0;
  for (const auto& row : problem.rows) {
    if (row.sense != Sense::Equal) ++n_slack;
  }
  // Decide which rows need artificials: after normalization the slack must be +1.
  std::vector<double> flip(rows, 1.0);
  std::size_t n_art = 0;
  std::vector<bool> needs_art(rows, false);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = problem.rows[i];
    flip[i] = row.rhs < 0.0 ? -1.0 : 1.0;
    double slack = row.sense == Sense::LessEqual ? 1.0 : (row.sense == Sense::GreaterEqual ? -1.0 : 0.0);
    slack *= flip[i];
    if (slack <= 0.0) {
      needs_art[i] = true;
      ++n_art;
    }
  }
  s.first_artificial = s.n_struct + n_slack;
  s.n_cols = s.first_artificial + n_art;
  s.a.assign(rows, std::vector<double>(s.n_cols, 0.0));
  s.b.assign(rows, 0.0);
  s.basis.assign(rows, npos);
  s.slack_of.assign(rows, npos);
  s.slack_sign.assign(rows, 0.0);
  s.artificial_of.assign(rows, npos);
  std::size_t next_slack = s.n_struct;
  std::size_t next_art = s.first_artificial;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = problem.rows[i];
    for (const auto& t : row.terms) {
      if (t.var >= s.n_struct) throw std::invalid_argument("constraint references unknown variable");
      s.a[i][t.var] += flip[i] * t.coef;
    }
    s.b[i] = flip[i] * row.rhs;
    if (row.sense != Sense::Equal) {
      const double sign = flip[i] * (row.sense == Sense::LessEqual ? 1.0 : -1.0);
      s.slack_of[i] = next_slack;
      s.slack_sign[i] = sign;
      s.a[i][next_slack] = sign;
      if (!needs_art[i]) s.basis[i] = next_slack;
      ++next_slack;
    }
    if (needs_art[i]) {
      s.artificial_of[i] = next_art;
      s.a[i][next_art] = 1.0;
      s.basis[i] = next_art;
      ++next_art;
    }
  }
  return s;
}

class Tableau {
 public:
  Tableau(const Standardized& s, const Options& options)
      : rows_(s.a.size()), cols_(s.n_cols), eps_(options.eps), t_(rows_ + 1, std::vector<double>(cols_ + 1, 0.0)),
        basis_(s.basis), allowed_(cols_, true) {
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t_[i][j] = s.a[i][j];
      t_[i][cols_] = s.b[i];
    }
  }

  // Loads reduced costs d_j = c_B B^-1 A_j - c_j for the current basis.
  void set_objective(const std::vector<double>& c) {
    cost_ = c;
    auto& z = t_[rows_];
    for (std::size_t j = 0; j <= cols_; ++j) z[j] = j < cols_ ? -c[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) z[j] += cb * t_[i][j];
    }
  }

  // Bland's rule iterations; returns false when unbounded.
  Status run(std::size_t& pivots, std::size_t max_pivots) {
    while (true) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed_[j] && t_[rows_][j] < -eps_) {
          enter = j;
          break;
        }
      }
      if (enter == npos) return Status::Optimal;
      std::size_t leave = npos;
      double best = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (t_[i][enter] <= eps_) continue;
        const double ratio = t_[i][cols_] / t_[i][enter];
        if (leave == npos || ratio < best - eps_ ||
            (ratio <= best + eps_ && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == npos) return Status::Unbounded;
      if (pivots++ >= max_pivots) return Status::IterationLimit;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const double inv = 1.0 / t_[r][c];
    for (double& x : t_[r]) x *= inv;
    t_[r][c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = t_[i][c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= factor * t_[r][j];
      t_[i][c] = 0.0;
    }
    basis_[r] = c;
  }

  double value() const { return t_[rows_][cols_]; }
  double entry(std::size_t i, std::size_t j) const { return t_[i][j]; }
  double rhs(std::size_t i) const { return t_[i][cols_]; }
  std::size_t rows() const { return rows_; }
  std::size_t basic(std::size_t i) const { return basis_[i]; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  void forbid(std::size_t j) { allowed_[j] = false; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  double eps_;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
  std::vector<double> cost_;
};

// Exact Gaussian elimination; returns nullopt when singular.
inline std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t k = a.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && a[piv][col] == 0) ++piv;
    if (piv == k) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const Rational factor = a[i][col] / a[col][col];
      for (std::size_t j = col; j < k; ++j) a[i][j] -= factor * a[col][j];
      b[i] -= factor * b[col];
    }
  }
  std::vector<Rational> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Recomputes the primal vertex and the duals of the final basis exactly and
// checks primal and dual feasibility.
inline RationalCheck rational_check(const Problem& problem, const Standardized& s,
                                    const std::vector<std::size_t>& final_basis) {
  RationalCheck out;
  const std::size_t rows = s.a.size();
  std::vector<bool> is_basic(s.n_cols, false);
  for (std::size_t j : final_basis) is_basic[j] = true;

  // Rows whose own slack or artificial is basic are dropped; the rest pin the structural basics.
  std::vector<std::size_t> tight_rows;
  for (std::size_t i = 0; i < rows; ++i) {
    const bool slack_basic = s.slack_of[i] != npos && is_basic[s.slack_of[i]];
    const bool art_basic = s.artificial_of[i] != npos && is_basic[s.artificial_of[i]];
    if (!slack_basic && !art_basic) tight_rows.push_back(i);
  }
  std::vector<std::size_t> structural;
  for (std::size_t j = 0; j < s.n_struct; ++j) {
    if (is_basic[j]) structural.push_back(j);
  }
  if (tight_rows.size() != structural.size()) return out;
  const std::size_t k = structural.size();

  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
  std::vector<Rational> b(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) a[r][c] = Rational(s.a[tight_rows[r]][structural[c]]);
    b[r] = Rational(s.b[tight_rows[r]]);
  }
  std::vector<Rational> x(s.n_struct, Rational(0));
  if (k > 0) {
    auto solved = solve_exact(a, b);
    if (!solved) return out;
    for (std::size_t c = 0; c < k; ++c) x[structural[c]] = (*solved)[c];
  }
  bool primal = true;
  for (const auto& xi : x) {
    if (xi < 0) primal = false;
  }
  for (std::size_t i = 0; i < rows && primal; ++i) {
    Rational lhs(0);
    for (std::size_t j = 0; j < s.n_struct; ++j) {
      if (s.a[i][j] != 0.0 && x[j] != 0) lhs += Rational(s.a[i][j]) * x[j];
    }
    const Rational residual = Rational(s.b[i]) - lhs;  // = slack_sign * slack (+ artificial)
    if (s.slack_of[i] != npos) {
      const Rational slack = residual / Rational(s.slack_sign[i]);
      if (slack < 0) primal = false;
    } else if (residual != 0) {
      primal = false;
    }
  }
  Rational value(0);
  for (std::size_t j = 0; j < s.n_struct; ++j) {
    if (problem.objective[j] != 0.0) value += Rational(problem.objective[j]) * x[j];
  }
  out.primal_feasible = primal;
  out.value = value.convert_to<double>();

  // Duals y on tight rows: A[R,S]^T y = c_S.
  std::vector<Rational> y(rows, Rational(0));
  if (k > 0) {
    std::vector<std::vector<Rational>> at(k, std::vector<Rational>(k));
    std::vector<Rational> cs(k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) at[c][r] = a[r][c];
      cs[r] = Rational(problem.objective[structural[r]]);
    }
    auto duals = solve_exact(at, cs);
    if (!duals) return out;
    for (std::size_t r = 0; r < k; ++r) y[tight_rows[r]] = (*duals)[r];
  }
  bool dual = true;
  for (std::size_t j = 0; j < s.n_struct && dual; ++j) {
    if (is_basic[j]) continue;
    Rational reduced(problem.objective[j]);
    for (std::size_t r : tight_rows) {
      if (s.a[r][j] != 0.0) reduced -= y[r] * Rational(s.a[r][j]);
    }
    if (reduced > 0) dual = false;
  }
  for (std::size_t r : tight_rows) {
    if (s.slack_of[r] == npos) continue;  // equality rows: free dual
    // Reduced cost of the nonbasic slack: 0 - y_r * sign <= 0.
    if (y[r] * Rational(s.slack_sign[r]) < 0) dual = false;
  }
  out.dual_feasible = dual;
  return out;
}

}  // namespace detail

inline Solution maximize(const Problem& problem, const Options& options = {}) {
  if (problem.objective.size() != problem.n_vars) throw std::invalid_argument("objective size mismatch");
  const auto s = detail::standardize(problem);
  detail::Tableau tab(s, options);
  Solution sol;

  // Phase 1: drive artificials to zero.
  if (s.first_artificial < s.n_cols) {
    std::vector<double> c1(s.n_cols, 0.0);
    for (std::size_t j = s.first_artificial; j < s.n_cols; ++j) c1[j] = -1.0;
    tab.set_objective(c1);
    const Status st = tab.run(sol.pivots, options.max_pivots);
    if (st == Status::IterationLimit) {
      sol.status = st;
      return sol;
    }
    double scale = 1.0;
    for (double b : s.b) scale = std::max(scale, std::abs(b));
    if (tab.value() < -options.eps * scale * 10.0) {
      sol.status = Status::Infeasible;
      return sol;
    }
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (tab.basic(i) < s.first_artificial) continue;
      for (std::size_t j = 0; j < s.first_artificial; ++j) {
        if (std::abs(tab.entry(i, j)) > options.eps) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j = s.first_artificial; j < s.n_cols; ++j) tab.forbid(j);
  }

  std::vector<double> c2(s.n_cols, 0.0);
  for (std::size_t j = 0; j < s.n_struct; ++j) c2[j] = problem.objective[j];
  tab.set_objective(c2);
  sol.status = tab.run(sol.pivots, options.max_pivots);
  if (sol.status != Status::Optimal) return sol;

  sol.value = tab.value();
  sol.x.assign(s.n_struct, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (tab.basic(i) < s.n_struct) sol.x[tab.basic(i)] = std::max(0.0, tab.rhs(i));
  }
  if (options.rational_check) sol.exact = detail::rational_check(problem, s, tab.basis());
  return sol;
}

}  // namespace lineup::lp
