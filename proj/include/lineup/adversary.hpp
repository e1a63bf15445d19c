#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lineup/core.hpp"
#include "lineup/exact.hpp"
#include "lineup/info.hpp"
#include "lineup/metric.hpp"
#include "lineup/simplex.hpp"

namespace lineup {

/// Worst ratio cost(M)/cost(Malt) over metrics consistent with an information set.
struct LpRatio {
  double value{1.0};
  lp::Status status{lp::Status::Optimal};
  /// Dense distance table over the shape's base points.
  std::optional<Table> witness;
  std::optional<lp::RationalCheck> exact;
};

struct AdversaryResult {
  double value{1.0};
  std::optional<Table> witness;
  Matching binding_alternative;
};

namespace detail {

// One LP variable per unordered pair of base points, plus the homogenizing
// scale t (always the last variable). Fixed distances are written as y = v t,
// so cost(Malt) = 1 normalizes without breaking them.
class RatioProgram {
 public:
  explicit RatioProgram(const Shape& shape) : shape_(shape), points_(shape.points()) {
    problem_.n_vars = points_ * (points_ - (points_ > 0 ? 1 : 0)) / 2 + 1;
    problem_.objective.assign(problem_.n_vars, 0.0);
  }

  std::size_t scale_var() const { return problem_.n_vars - 1; }

  std::size_t pair(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    // Row-major strict upper triangle.
    return i * points_ - i * (i + 1) / 2 + (j - i - 1);
  }

  using Expr = std::vector<lp::Term>;

  void add_distance(Expr& e, std::size_t a, std::size_t b, double coef) const {
    if (a != b) e.push_back({pair(a, b), coef});
  }

  void add_to_position(Expr& e, std::size_t a, std::size_t p, double coef) const {
    const auto& members = shape_.positions[p].members;
    const double w = coef / static_cast<double>(members.size());
    for (std::size_t q : members) add_distance(e, a, q, w);
  }

  std::size_t candidate(std::size_t c) const { return shape_.n + c; }

  Expr cost(const Matching& matching) const {
    Expr e;
    for (std::size_t p = 0; p < matching.size(); ++p) {
      const std::size_t c = candidate(matching[p]);
      for (std::size_t v = 0; v < shape_.n; ++v) add_distance(e, v, c, 1.0);
      add_to_position(e, c, p, static_cast<double>(shape_.n));
    }
    return e;
  }

  void add(Expr e, lp::Sense sense, double rhs) { problem_.rows.push_back({std::move(e), sense, rhs}); }

  void add_triangles() {
    for (std::size_t i = 0; i < points_; ++i) {
      for (std::size_t k = i + 1; k < points_; ++k) {
        for (std::size_t j = 0; j < points_; ++j) {
          if (j == i || j == k) continue;
          add({{pair(i, k), 1.0}, {pair(i, j), -1.0}, {pair(j, k), -1.0}}, lp::Sense::LessEqual, 0.0);
        }
      }
    }
  }

  void add_voter_preferences(const VoterProfile& profile) {
    for (std::size_t v = 0; v < shape_.n; ++v) {
      for (std::size_t p = 0; p < shape_.l(); ++p) {
        const auto ranking = profile.ranking(v, p);
        for (std::size_t r = 0; r + 1 < ranking.size(); ++r) {
          const std::size_t better = candidate(ranking[r]);
          const std::size_t worse = candidate(ranking[r + 1]);
          Expr e;
          add_distance(e, v, better, 1.0);
          add_to_position(e, better, p, 1.0);
          add_distance(e, v, worse, -1.0);
          add_to_position(e, worse, p, -1.0);
          add(std::move(e), lp::Sense::LessEqual, 0.0);
        }
      }
    }
  }

  void add_position_preferences(const PositionProfile& profile) {
    for (std::size_t p = 0; p < shape_.l(); ++p) {
      const auto ranking = profile.ranking(p);
      for (std::size_t r = 0; r + 1 < ranking.size(); ++r) {
        Expr e;
        add_to_position(e, candidate(ranking[r]), p, 1.0);
        add_to_position(e, candidate(ranking[r + 1]), p, -1.0);
        add(std::move(e), lp::Sense::LessEqual, 0.0);
      }
    }
  }

  void add_locations(const LocationInfo& info) {
    const std::size_t m = shape_.m;
    if (info.located) {
      const std::size_t total = m + shape_.sites;
      auto base = [&](std::size_t i) { return i < m ? candidate(i) : shape_.n + m + (i - m); };
      for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t j = i + 1; j < total; ++j) {
          add({{pair(base(i), base(j)), 1.0}, {scale_var(), -(*info.located)(i, j)}}, lp::Sense::Equal, 0.0);
        }
      }
    }
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t p = 0; p < shape_.l(); ++p) {
        Expr e;
        add_to_position(e, candidate(c), p, 1.0);
        e.push_back({scale_var(), -info.cp(c, p)});
        add(std::move(e), lp::Sense::Equal, 0.0);
      }
    }
  }

  void set_objective(const Expr& e) {
    for (const auto& t : e) problem_.objective[t.var] += t.coef;
  }

  const lp::Problem& problem() const { return problem_; }

  Table witness(const std::vector<double>& x, bool homogenized) const {
    double scale = 1.0;
    if (homogenized) {
      const double t = x[scale_var()];
      if (!(t > 0.0)) throw InconsistencyError("fixed distances admit no metric with positive scale");
      scale = 1.0 / t;
    }
    Table d(points_, points_);
    for (std::size_t i = 0; i < points_; ++i) {
      for (std::size_t j = i + 1; j < points_; ++j) d(i, j) = d(j, i) = x[pair(i, j)] * scale;
    }
    return d;
  }

 private:
  Shape shape_;
  std::size_t points_;
  lp::Problem problem_;
};

}  // namespace detail

/// Solves max cost(M, d) / cost(Malt, d) over every metric d consistent with
/// `info`. Strict preferences are relaxed to weak ones, so the value is the
/// supremum. Returns +inf when the ratio is unbounded.
inline LpRatio pairwise_lp_ratio(const InfoSet& info, const Matching& matching, const Matching& alternative,
                                 const lp::Options& options = {}) {
  info.validate();
  require_valid_matching(matching, info.shape.m, info.shape.l());
  require_valid_matching(alternative, info.shape.m, info.shape.l());

  detail::RatioProgram program(info.shape);
  program.add_triangles();
  if (info.voters) program.add_voter_preferences(*info.voters);
  if (info.positions) program.add_position_preferences(*info.positions);
  if (info.location) program.add_locations(*info.location);
  program.add(program.cost(alternative), lp::Sense::Equal, 1.0);
  program.set_objective(program.cost(matching));

  const lp::Solution sol = lp::maximize(program.problem(), options);
  LpRatio out;
  out.status = sol.status;
  switch (sol.status) {
    case lp::Status::Infeasible:
      throw InconsistencyError("no metric is consistent with the information set and a positive alternative cost");
    case lp::Status::IterationLimit:
      throw ResourceLimitError("simplex pivot limit reached");
    case lp::Status::Unbounded:
      out.value = kInfinity;
      return out;
    case lp::Status::Optimal:
      break;
  }
  out.value = sol.value;
  out.exact = sol.exact;
  std::vector<double> x = sol.x;
  const std::size_t t = program.scale_var();
  if (info.location && x[t] <= 1e-12) {
    // The supremum sits at zero scale; blend in a positive-scale point.
    lp::Problem p = program.problem();
    p.objective.assign(p.n_vars, 0.0);
    p.objective[t] = 1.0;
    p.rows.push_back({{{t, 1.0}}, lp::Sense::LessEqual, 1.0});
    lp::Options plain = options;
    plain.rational_check = false;
    const lp::Solution inner = lp::maximize(p, plain);
    if (inner.status != lp::Status::Optimal || inner.value <= 1e-12) {
      throw InconsistencyError("fixed distances admit no metric with positive scale");
    }
    constexpr double kBlend = 1e-9;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (1.0 - kBlend) * x[i] + kBlend * inner.x[i];
  }
  out.witness = program.witness(x, info.location.has_value());
  return out;
}

inline constexpr std::size_t kAlternativeLimit = 10'000;

/// Distortion of M under the information set: the worst pairwise ratio over
/// every alternative matching.
inline AdversaryResult worst_case_distortion(const InfoSet& info, const Matching& matching,
                                             const lp::Options& options = {}) {
  info.validate();
  require_valid_matching(matching, info.shape.m, info.shape.l());
  if (count_injections(info.shape.m, info.shape.l(), kAlternativeLimit) > kAlternativeLimit) {
    throw ResourceLimitError("more than 10^4 alternative matchings");
  }
  AdversaryResult result;
  result.binding_alternative = matching;
  for_each_matching(info.shape.m, info.shape.l(), [&](const Matching& alt) {
    if (alt == matching) return;
    LpRatio r = pairwise_lp_ratio(info, matching, alt, options);
    if (r.value > result.value) {
      result.value = r.value;
      result.witness = std::move(r.witness);
      result.binding_alternative = alt;
    }
  });
  return result;
}

/// Metric instance carrying a witness table over the given shape.
inline MetricInstance witness_instance(const Shape& shape, const Table& witness, std::string label = "witness") {
  return MetricInstance::from_table(shape.n, shape.m, shape.sites, witness, shape.positions, std::move(label));
}

/// Returns a description of every way `d` fails to be a metric consistent with `info`.
inline std::vector<std::string> consistency_failures(const InfoSet& info, const Table& d, double tol = 1e-7) {
  std::vector<std::string> failures;
  const MetricInstance inst = witness_instance(info.shape, d);
  const ValidationReport report = validate_metric(inst);
  for (const auto& v : report.violations) {
    failures.push_back(std::string("metric axiom ") + to_string(v.axiom) + " violated");
  }
  auto close_le = [&](double a, double b) { return a <= b + tol * std::max(1.0, std::abs(b)); };
  if (info.voters) {
    for (std::size_t v = 0; v < info.shape.n; ++v) {
      for (std::size_t p = 0; p < info.shape.l(); ++p) {
        const auto ranking = info.voters->ranking(v, p);
        for (std::size_t r = 0; r + 1 < ranking.size(); ++r) {
          const double better = inst.voter_candidate(v, ranking[r]) + inst.candidate_position(ranking[r], p);
          const double worse = inst.voter_candidate(v, ranking[r + 1]) + inst.candidate_position(ranking[r + 1], p);
          if (!close_le(better, worse)) failures.push_back("voter preference violated");
        }
      }
    }
  }
  if (info.positions) {
    for (std::size_t p = 0; p < info.shape.l(); ++p) {
      const auto ranking = info.positions->ranking(p);
      for (std::size_t r = 0; r + 1 < ranking.size(); ++r) {
        if (!close_le(inst.candidate_position(ranking[r], p), inst.candidate_position(ranking[r + 1], p))) {
          failures.push_back("position preference violated");
        }
      }
    }
  }
  if (info.location) {
    for (std::size_t c = 0; c < info.shape.m; ++c) {
      for (std::size_t p = 0; p < info.shape.l(); ++p) {
        const double want = info.location->cp(c, p);
        if (std::abs(inst.candidate_position(c, p) - want) > tol * std::max(1.0, want)) {
          failures.push_back("candidate-position distance differs from the known value");
        }
      }
    }
  }
  return failures;
}

}  // namespace lineup
