#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lineup/metric.hpp"

namespace lineup {

namespace detail {

inline bool is_permutation_of_range(std::span<const std::size_t> values, std::size_t m) {
  if (values.size() != m) return false;
  std::vector<bool> seen(m, false);
  for (std::size_t c : values) {
    if (c >= m || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

// Candidates sorted by key ascending; keys equal up to tolerance tie, broken by index.
template <class Key>
std::vector<std::size_t> rank_by(std::size_t m, Key key) {
  std::vector<double> keys(m);
  for (std::size_t c = 0; c < m; ++c) keys[c] = key(c);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
  // Keys within tolerance of their predecessor share a tie group.
  std::vector<std::size_t> group(m, 0);
  for (std::size_t i = 1; i < m; ++i) {
    const bool tied = approx_eq(keys[order[i - 1]], keys[order[i]]);
    group[order[i]] = group[order[i - 1]] + (tied ? 0 : 1);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return group[x] != group[y] ? group[x] < group[y] : x < y; });
  return order;
}

}  // namespace detail

/// Every voter's ranking of all candidates for every position, best first.
class VoterProfile {
 public:
  VoterProfile() = default;

  /// rankings[v][p] is a permutation of 0..m-1.
  VoterProfile(std::size_t m, std::size_t l, std::vector<std::vector<std::vector<std::size_t>>> rankings)
      : n_(rankings.size()), m_(m), l_(l) {
    data_.reserve(n_ * l_ * m_);
    for (const auto& per_voter : rankings) {
      if (per_voter.size() != l_) throw std::invalid_argument("voters rank different numbers of positions");
      for (const auto& ranking : per_voter) {
        if (!detail::is_permutation_of_range(ranking, m_)) {
          throw std::invalid_argument("voter ranking is not a permutation of the candidates");
        }
        data_.insert(data_.end(), ranking.begin(), ranking.end());
      }
    }
  }

  std::size_t n_voters() const { return n_; }
  std::size_t n_candidates() const { return m_; }
  std::size_t n_positions() const { return l_; }

  std::span<const std::size_t> ranking(std::size_t voter, std::size_t position) const {
    return std::span<const std::size_t>(data_).subspan((voter * l_ + position) * m_, m_);
  }

  std::vector<std::vector<std::vector<std::size_t>>> nested() const {
    std::vector<std::vector<std::vector<std::size_t>>> out(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      for (std::size_t p = 0; p < l_; ++p) {
        auto r = ranking(v, p);
        out[v].emplace_back(r.begin(), r.end());
      }
    }
    return out;
  }

  friend bool operator==(const VoterProfile&, const VoterProfile&) = default;

 private:
  std::size_t n_{0};
  std::size_t m_{0};
  std::size_t l_{0};
  std::vector<std::size_t> data_;
};

/// Each position's ranking of candidates by fitness, best first.
class PositionProfile {
 public:
  PositionProfile() = default;

  PositionProfile(std::size_t m, std::vector<std::vector<std::size_t>> rankings)
      : m_(m), rankings_(std::move(rankings)) {
    for (const auto& ranking : rankings_) {
      if (!detail::is_permutation_of_range(ranking, m_)) {
        throw std::invalid_argument("position ranking is not a permutation of the candidates");
      }
    }
  }

  std::size_t n_candidates() const { return m_; }
  std::size_t n_positions() const { return rankings_.size(); }
  std::span<const std::size_t> ranking(std::size_t position) const { return rankings_.at(position); }
  const std::vector<std::vector<std::size_t>>& nested() const { return rankings_; }

  friend bool operator==(const PositionProfile&, const PositionProfile&) = default;

 private:
  std::size_t m_{0};
  std::vector<std::vector<std::size_t>> rankings_;
};

struct PairwiseTally {
  std::size_t n_a{0};
  std::size_t n_b{0};

  friend bool operator==(const PairwiseTally&, const PairwiseTally&) = default;
};

/// Rankings by d(v,c) + d(c,p), ties broken toward the smaller candidate index.
inline VoterProfile voter_profile(const MetricInstance& instance) {
  const std::size_t m = instance.n_candidates();
  const Table cp = instance.candidate_position_table();
  std::vector<std::vector<std::vector<std::size_t>>> rankings(instance.n_voters());
  for (std::size_t v = 0; v < instance.n_voters(); ++v) {
    for (std::size_t p = 0; p < instance.n_positions(); ++p) {
      rankings[v].push_back(
          detail::rank_by(m, [&](std::size_t c) { return instance.voter_candidate(v, c) + cp(c, p); }));
    }
  }
  return VoterProfile(m, instance.n_positions(), std::move(rankings));
}

/// Rankings by d(c,p), ties broken toward the smaller candidate index.
inline PositionProfile position_profile(const MetricInstance& instance) {
  const Table cp = instance.candidate_position_table();
  std::vector<std::vector<std::size_t>> rankings;
  for (std::size_t p = 0; p < instance.n_positions(); ++p) {
    rankings.push_back(detail::rank_by(instance.n_candidates(), [&](std::size_t c) { return cp(c, p); }));
  }
  return PositionProfile(instance.n_candidates(), std::move(rankings));
}

/// Counts voters ranking a before b for the given position.
inline PairwiseTally tally_pair(const VoterProfile& profile, std::size_t position, std::size_t a, std::size_t b) {
  if (a == b) throw std::invalid_argument("tally_pair needs two distinct candidates");
  if (a >= profile.n_candidates() || b >= profile.n_candidates() || position >= profile.n_positions()) {
    throw std::invalid_argument("tally_pair index out of range");
  }
  PairwiseTally tally;
  for (std::size_t v = 0; v < profile.n_voters(); ++v) {
    for (std::size_t c : profile.ranking(v, position)) {
      if (c == a) {
        ++tally.n_a;
        break;
      }
      if (c == b) break;
    }
  }
  tally.n_b = profile.n_voters() - tally.n_a;
  return tally;
}

}  // namespace lineup
