#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lineup/assignment.hpp"
#include "lineup/metric.hpp"
#include "lineup/ordinal.hpp"

namespace lineup {

/// Single-winner election: every voter ranks the same candidate set, best first.
/// Candidates keep their ids from the surrounding line-up election.
class StandardElection {
 public:
  StandardElection() = default;

  explicit StandardElection(std::vector<std::vector<std::size_t>> rankings) : rankings_(std::move(rankings)) {
    if (rankings_.empty()) return;
    std::vector<std::size_t> reference = rankings_.front();
    std::sort(reference.begin(), reference.end());
    if (std::adjacent_find(reference.begin(), reference.end()) != reference.end()) {
      throw std::invalid_argument("ranking repeats a candidate");
    }
    for (const auto& ranking : rankings_) {
      std::vector<std::size_t> sorted = ranking;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != reference) throw std::invalid_argument("voters rank different candidate sets");
    }
    candidates_ = std::move(reference);
  }

  std::size_t n_voters() const { return rankings_.size(); }
  const std::vector<std::size_t>& candidates() const { return candidates_; }
  const std::vector<std::size_t>& ranking(std::size_t voter) const { return rankings_[voter]; }

 private:
  std::vector<std::vector<std::size_t>> rankings_;
  std::vector<std::size_t> candidates_;
};

namespace detail {

inline std::vector<std::size_t> identity_order(std::size_t size) {
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

inline std::vector<std::size_t> resolve_order(const std::vector<std::size_t>& order, std::size_t size,
                                              const char* what) {
  if (order.empty()) return identity_order(size);
  if (!is_permutation_of_range(order, size)) {
    throw std::invalid_argument(std::string(what) + " is not a permutation");
  }
  return order;
}

}  // namespace detail

/// Plurality veto. Each candidate starts with its plurality score; voters in
/// `voter_order` then veto their least-preferred candidate that still has a
/// positive score. The candidate hit by the final veto wins. An empty order
/// means voters 0..n-1.
inline std::size_t plurality_veto(const StandardElection& election, const std::vector<std::size_t>& voter_order = {}) {
  if (election.candidates().empty() && election.n_voters() > 0) {
    throw std::invalid_argument("plurality veto needs at least one candidate");
  }
  if (election.n_voters() == 0) throw std::invalid_argument("plurality veto needs at least one voter");
  const auto order = detail::resolve_order(voter_order, election.n_voters(), "voter order");
  const auto& ids = election.candidates();
  std::size_t max_id = *std::max_element(ids.begin(), ids.end());
  std::vector<std::size_t> score(max_id + 1, 0);
  for (std::size_t v = 0; v < election.n_voters(); ++v) ++score[election.ranking(v).front()];

  std::size_t last = election.ranking(order.front()).front();
  for (std::size_t v : order) {
    const auto& ranking = election.ranking(v);
    for (auto it = ranking.rbegin(); it != ranking.rend(); ++it) {
      if (score[*it] > 0) {
        --score[*it];
        last = *it;
        break;
      }
    }
  }
  return last;
}

/// Restricts each voter's ranking for `position` to `remaining`, keeping order.
inline StandardElection lift_to_standard(const VoterProfile& profile, std::size_t position,
                                         const std::vector<std::size_t>& remaining) {
  if (remaining.empty()) throw std::invalid_argument("lift_to_standard needs a nonempty candidate set");
  std::vector<bool> keep(profile.n_candidates(), false);
  for (std::size_t c : remaining) {
    if (c >= profile.n_candidates()) throw std::invalid_argument("remaining candidate out of range");
    keep[c] = true;
  }
  std::vector<std::vector<std::size_t>> rankings(profile.n_voters());
  for (std::size_t v = 0; v < profile.n_voters(); ++v) {
    for (std::size_t c : profile.ranking(v, position)) {
      if (keep[c]) rankings[v].push_back(c);
    }
  }
  return StandardElection(std::move(rankings));
}

/// Base rule used by iterative election.
struct SingleWinnerRule {
  std::string name;
  /// Distortion the rule guarantees on standard elections.
  double distortion{1.0};
  std::function<std::size_t(const StandardElection&)> pick;
};

inline SingleWinnerRule plurality_veto_rule(std::vector<std::size_t> voter_order = {}) {
  return {"plurality-veto", 3.0,
          [order = std::move(voter_order)](const StandardElection& e) { return plurality_veto(e, order); }};
}

struct MechanismConfig {
  SingleWinnerRule base = plurality_veto_rule();
  /// Empty means positions 0..l-1.
  std::vector<std::size_t> position_order;
};

/// Iterative election: positions in order each run the base rule over the
/// still-unassigned candidates on that position's rankings.
inline Matching iterative_election(const VoterProfile& profile, const MechanismConfig& config = {}) {
  const std::size_t m = profile.n_candidates();
  const std::size_t l = profile.n_positions();
  if (l > m) throw std::invalid_argument("more positions than candidates");
  const auto order = detail::resolve_order(config.position_order, l, "position order");
  std::vector<bool> taken(m, false);
  Matching out;
  out.assignment.assign(l, 0);
  for (std::size_t p : order) {
    std::vector<std::size_t> remaining;
    for (std::size_t c = 0; c < m; ++c) {
      if (!taken[c]) remaining.push_back(c);
    }
    const std::size_t winner = config.base.pick(lift_to_standard(profile, p, remaining));
    if (winner >= m || taken[winner]) throw std::logic_error("base rule picked an unavailable candidate");
    taken[winner] = true;
    out.assignment[p] = winner;
  }
  return out;
}

/// Serial dictatorship on positions: each position, in order, takes its
/// favourite remaining candidate.
inline Matching serial_dictatorship(const PositionProfile& profile, const std::vector<std::size_t>& position_order = {}) {
  const std::size_t m = profile.n_candidates();
  const std::size_t l = profile.n_positions();
  if (l > m) throw std::invalid_argument("more positions than candidates");
  const auto order = detail::resolve_order(position_order, l, "position order");
  std::vector<bool> taken(m, false);
  Matching out;
  out.assignment.assign(l, 0);
  for (std::size_t p : order) {
    for (std::size_t c : profile.ranking(p)) {
      if (!taken[c]) {
        taken[c] = true;
        out.assignment[p] = c;
        break;
      }
    }
  }
  return out;
}

/// Matching minimizing the total candidate-position distance; exact, with the
/// lexicographically smallest minimizer returned. cp(c, p) = d(c, p).
inline Matching min_position_cost_matching(const Table& cp) {
  for (double x : cp.data()) {
    if (x < 0.0) throw std::invalid_argument("negative candidate-position distance");
  }
  return min_cost_assignment(cp).matching;
}

/// Which member of a candidate pair a two-candidate rule selects.
enum class PairSide { A, B };

/// Location-aware rule for two candidates: A iff n_b * d(A,1) <= n_a * d(B,1).
inline PairSide two_candidate_location_rule(double d_a, double d_b, PairwiseTally tally) {
  if (d_a < 0.0 || d_b < 0.0) throw std::invalid_argument("negative candidate-position distance");
  return static_cast<double>(tally.n_b) * d_a <= static_cast<double>(tally.n_a) * d_b ? PairSide::A : PairSide::B;
}

/// Rule using position and voter preferences for two candidates; A must be the
/// candidate closer to the position. A iff n_b <= 2 n_a.
inline PairSide two_candidate_hybrid_rule(PairwiseTally tally) {
  return tally.n_b <= 2 * tally.n_a ? PairSide::A : PairSide::B;
}

namespace detail {

// Orders a pair so that the first is the candidate closer to the position,
// distance ties toward the smaller index.
inline std::pair<std::size_t, std::size_t> closer_first(const Table& cp, std::size_t position, std::size_t x,
                                                        std::size_t y) {
  if (x > y) std::swap(x, y);
  if (cp(y, position) < cp(x, position)) return {y, x};
  return {x, y};
}

inline void require_single_position_pair(std::size_t m, std::size_t l) {
  if (m != 2 || l != 1) throw std::invalid_argument("two-candidate rules need exactly 2 candidates and 1 position");
}

}  // namespace detail

/// Winner of the location rule between candidates x and y for `position`.
inline std::size_t pair_location_winner(const Table& cp, const VoterProfile& profile, std::size_t position,
                                        std::size_t x, std::size_t y) {
  const auto [a, b] = detail::closer_first(cp, position, x, y);
  const auto side = two_candidate_location_rule(cp(a, position), cp(b, position), tally_pair(profile, position, a, b));
  return side == PairSide::A ? a : b;
}

/// Location rule on a (2,1) election.
inline Matching pair_location(const Table& cp, const VoterProfile& profile) {
  detail::require_single_position_pair(profile.n_candidates(), profile.n_positions());
  return Matching{{pair_location_winner(cp, profile, 0, 0, 1)}};
}

/// Hybrid rule on a (2,1) election; the closer candidate is the position's top choice.
inline Matching pair_hybrid(const PositionProfile& positions, const VoterProfile& voters) {
  detail::require_single_position_pair(voters.n_candidates(), voters.n_positions());
  const std::size_t a = positions.ranking(0)[0];
  const std::size_t b = positions.ranking(0)[1];
  const auto side = two_candidate_hybrid_rule(tally_pair(voters, 0, a, b));
  return Matching{{side == PairSide::A ? a : b}};
}

/// Complete tournament on candidates; beats[x][y] is true when x wins the
/// pairwise location rule against y.
struct Tournament {
  std::vector<std::vector<bool>> beats;

  std::size_t size() const { return beats.size(); }
  std::size_t out_degree(std::size_t x) const {
    return static_cast<std::size_t>(std::count(beats[x].begin(), beats[x].end(), true));
  }
};

inline Tournament location_tournament(const Table& cp, const VoterProfile& profile, std::size_t position) {
  const std::size_t m = profile.n_candidates();
  Tournament t;
  t.beats.assign(m, std::vector<bool>(m, false));
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = x + 1; y < m; ++y) {
      const std::size_t w = pair_location_winner(cp, profile, position, x, y);
      t.beats[w][w == x ? y : x] = true;
    }
  }
  return t;
}

/// Max out-degree vertex of the location tournament, ties toward smaller index.
inline std::size_t tournament_location_rule(const Table& cp, const VoterProfile& profile, std::size_t position = 0) {
  if (profile.n_candidates() == 0) throw std::invalid_argument("tournament rule needs candidates");
  const Tournament t = location_tournament(cp, profile, position);
  std::size_t best = 0;
  for (std::size_t x = 1; x < t.size(); ++x) {
    if (t.out_degree(x) > t.out_degree(best)) best = x;
  }
  return best;
}

}  // namespace lineup
