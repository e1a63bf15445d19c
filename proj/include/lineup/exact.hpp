#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lineup/assignment.hpp"
#include "lineup/core.hpp"
#include "lineup/metric.hpp"

namespace lineup {

/// Calls `visit` for every injective matching of l positions into m
/// candidates, in lexicographic order of the assignment array.
inline void for_each_matching(std::size_t m, std::size_t l, const std::function<void(const Matching&)>& visit) {
  if (l > m) return;
  Matching current;
  current.assignment.assign(l, 0);
  std::vector<bool> used(m, false);
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == l) {
      visit(current);
      return;
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (used[c]) continue;
      used[c] = true;
      current.assignment[p] = c;
      rec(p + 1);
      used[c] = false;
    }
  };
  rec(0);
}

inline std::vector<Matching> all_matchings(std::size_t m, std::size_t l) {
  std::vector<Matching> out;
  for_each_matching(m, l, [&](const Matching& x) { out.push_back(x); });
  return out;
}

/// Weight table w(c,p) = sum_v d(v,c) + n d(c,p); the social cost separates over these.
inline Table social_weights(const MetricInstance& instance) {
  Table w(instance.n_candidates(), instance.n_positions());
  for (std::size_t c = 0; c < instance.n_candidates(); ++c) {
    for (std::size_t p = 0; p < instance.n_positions(); ++p) w(c, p) = pair_cost(instance, c, p);
  }
  return w;
}

/// Exact social-cost minimizer via linear assignment (lexicographic tie-break).
inline Matching optimal_matching(const MetricInstance& instance) {
  return min_cost_assignment(social_weights(instance)).matching;
}

inline constexpr std::size_t kBruteForceLimit = 1'000'000;

/// Enumeration oracle: lexicographically first matching whose cost is within
/// tolerance of the minimum.
inline Matching brute_force_optimal(const MetricInstance& instance) {
  const std::size_t m = instance.n_candidates();
  const std::size_t l = instance.n_positions();
  if (count_injections(m, l, kBruteForceLimit) > kBruteForceLimit) {
    throw ResourceLimitError("brute force over more than 10^6 matchings");
  }
  double best = kInfinity;
  for_each_matching(m, l, [&](const Matching& x) { best = std::min(best, cost_of_matching(instance, x).total); });
  std::optional<Matching> first;
  for_each_matching(m, l, [&](const Matching& x) {
    if (!first && approx_le(cost_of_matching(instance, x).total, best)) first = x;
  });
  if (first) return *first;
  throw std::logic_error("no matching enumerated");
}

/// Distortion of M on a fully known instance.
inline double empirical_distortion(const MetricInstance& instance, const Matching& matching) {
  const double cost = cost_of_matching(instance, matching).total;
  const double best = cost_of_matching(instance, optimal_matching(instance)).total;
  return cost_ratio(cost, best);
}

// ---------------------------------------------------------------------------
// Corrected matching M2 between a mechanism's M1 and the optimum M*

inline constexpr std::size_t kNoCandidate = std::numeric_limits<std::size_t>::max();

struct MatchingTransform {
  std::vector<std::size_t> s1;  // cand(M1) \ cand(M*)
  std::vector<std::size_t> s2;  // cand(M1) & cand(M*)
  std::vector<std::size_t> s3;  // cand(M*) \ cand(M1)
  Matching m2;
  /// f[c] = M*(M2^-1(c)) for c in S2 u S3, kNoCandidate elsewhere.
  std::vector<std::size_t> f;
};

/// Returns a description of every violated transform property; empty when all hold.
inline std::vector<std::string> transform_property_failures(const MatchingTransform& t, const Matching& m1,
                                                            const Matching& mstar, std::size_t m) {
  std::vector<std::string> failures;
  const auto in1 = candidate_mask(m1, m);
  const auto in_star = candidate_mask(mstar, m);
  std::vector<int> cls(m, 0);
  for (std::size_t c : t.s1) cls[c] = 1;
  for (std::size_t c : t.s2) cls[c] = 2;
  for (std::size_t c : t.s3) cls[c] = 3;
  for (std::size_t c = 0; c < m; ++c) {
    const int want = in1[c] && !in_star[c] ? 1 : (in1[c] && in_star[c] ? 2 : (!in1[c] && in_star[c] ? 3 : 0));
    if (cls[c] != want) failures.push_back("candidate " + std::to_string(c) + " in wrong class");
  }
  if (t.s1.size() != t.s3.size()) failures.push_back("|S1| != |S3|");
  if (!is_valid_matching(t.m2, m, mstar.size())) {
    failures.push_back("M2 is not a matching");
    return failures;
  }
  if (candidate_mask(t.m2, m) != in_star) failures.push_back("property 1: cand(M2) != cand(M*)");

  std::vector<bool> image(m, false);
  for (std::size_t c = 0; c < m; ++c) {
    if (!in_star[c]) {
      if (t.f[c] != kNoCandidate) failures.push_back("f defined outside S2 u S3");
      continue;
    }
    const std::size_t fc = t.f[c];
    if (fc == kNoCandidate || fc >= m || !in_star[fc] || image[fc]) {
      failures.push_back("property 2: f is not a bijection on S2 u S3");
      break;
    }
    image[fc] = true;
  }
  for (std::size_t p = 0; p < t.m2.size(); ++p) {
    if (t.f[t.m2[p]] != mstar[p]) failures.push_back("f(c) != M*(M2^-1(c)) at position " + std::to_string(p));
  }
  for (std::size_t c : t.s3) {
    const std::size_t fc = t.f[c];
    if (fc != c && !(fc < m && in1[fc] && in_star[fc])) {
      failures.push_back("property 3: f(" + std::to_string(c) + ") neither in S2 nor fixed");
    }
  }
  return failures;
}

/// Builds M2: keep S2 assignments of M1, move S1 slots to M*'s S3 candidate
/// when that candidate belongs there, and fill the rest with the remaining S3
/// candidates in increasing index order.
inline MatchingTransform build_corrected_matching(const Matching& m1, const Matching& mstar, std::size_t m) {
  if (m1.size() != mstar.size() || !is_valid_matching(m1, m, m1.size()) || !is_valid_matching(mstar, m, m1.size())) {
    throw std::invalid_argument("matchings must be valid and of the same shape");
  }
  const std::size_t l = m1.size();
  const auto in1 = candidate_mask(m1, m);
  const auto in_star = candidate_mask(mstar, m);
  MatchingTransform t;
  for (std::size_t c = 0; c < m; ++c) {
    if (in1[c] && !in_star[c]) t.s1.push_back(c);
    if (in1[c] && in_star[c]) t.s2.push_back(c);
    if (!in1[c] && in_star[c]) t.s3.push_back(c);
  }
  auto in_s3 = [&](std::size_t c) { return !in1[c] && in_star[c]; };

  t.m2.assignment.assign(l, kNoCandidate);
  std::vector<bool> placed(m, false);
  for (std::size_t p = 0; p < l; ++p) {
    if (in_star[m1[p]]) {
      t.m2.assignment[p] = m1[p];
      placed[m1[p]] = true;
    }
  }
  for (std::size_t p = 0; p < l; ++p) {
    if (!in_star[m1[p]] && in_s3(mstar[p])) {
      t.m2.assignment[p] = mstar[p];
      placed[mstar[p]] = true;
    }
  }
  auto next = t.s3.begin();
  for (std::size_t p = 0; p < l; ++p) {
    if (t.m2[p] != kNoCandidate) continue;
    while (placed[*next]) ++next;
    t.m2.assignment[p] = *next;
    placed[*next] = true;
  }

  t.f.assign(m, kNoCandidate);
  for (std::size_t p = 0; p < l; ++p) t.f[t.m2[p]] = mstar[p];

  const auto failures = transform_property_failures(t, m1, mstar, m);
  if (!failures.empty()) throw std::logic_error("corrected matching violates: " + failures.front());
  return t;
}

// ---------------------------------------------------------------------------
// Generic (alpha, beta) charging bound

struct BoundParameters {
  double alpha{1.0};
  double beta{1.0};
};

struct AlphaBetaReport {
  bool hypothesis_holds{true};
  /// Largest lhs - rhs of the hypothesis over all (c in S1, c' in S3); <= 0 when it holds.
  double worst_hypothesis_gap{-kInfinity};
  double cost_m1{0.0};
  double cost_mstar{0.0};
  double bound{0.0};
  double ratio{1.0};
  bool conclusion_holds{true};
};

/// Checks, on the true metric, the hypothesis
///   sum_v [d(v,c) + d(c,M1^-1(c))] <= alpha sum_v d(v,c') + beta sum_v d(c',M1^-1(c))
/// for every c in S1 and c' in S3, and the conclusion cost(M1) <= (alpha+beta+1) cost(M*).
inline AlphaBetaReport verify_alpha_beta_bound(const MetricInstance& instance, const Matching& m1,
                                               const Matching& mstar, BoundParameters params) {
  if (params.alpha + params.beta < 2.0) throw std::invalid_argument("alpha + beta must be at least 2");
  const std::size_t m = instance.n_candidates();
  const std::size_t l = instance.n_positions();
  require_valid_matching(m1, m, l);
  require_valid_matching(mstar, m, l);
  const auto in1 = candidate_mask(m1, m);
  const auto in_star = candidate_mask(mstar, m);
  const double n = static_cast<double>(instance.n_voters());

  std::vector<double> voter_sum(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t v = 0; v < instance.n_voters(); ++v) voter_sum[c] += instance.voter_candidate(v, c);
  }

  AlphaBetaReport report;
  for (std::size_t p = 0; p < l; ++p) {
    const std::size_t c = m1[p];
    if (in_star[c]) continue;  // only S1
    const double lhs = voter_sum[c] + n * instance.candidate_position(c, p);
    for (std::size_t other = 0; other < m; ++other) {
      if (in1[other] || !in_star[other]) continue;  // only S3
      const double rhs = params.alpha * voter_sum[other] + params.beta * n * instance.candidate_position(other, p);
      report.worst_hypothesis_gap = std::max(report.worst_hypothesis_gap, lhs - rhs);
      if (!approx_le(lhs, rhs)) report.hypothesis_holds = false;
    }
  }
  report.cost_m1 = cost_of_matching(instance, m1).total;
  report.cost_mstar = cost_of_matching(instance, mstar).total;
  report.bound = (params.alpha + params.beta + 1.0) * report.cost_mstar;
  report.ratio = cost_ratio(report.cost_m1, report.cost_mstar);
  report.conclusion_holds = !report.hypothesis_holds || approx_le(report.cost_m1, report.bound);
  return report;
}

}  // namespace lineup
