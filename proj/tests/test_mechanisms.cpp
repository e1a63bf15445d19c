#include <gtest/gtest.h>

#include <algorithm>

#include "lineup/exact.hpp"
#include "lineup/harness.hpp"
#include "lineup/lower_bounds.hpp"
#include "lineup/mechanisms.hpp"

using namespace lineup;

namespace {

GeneratorSpec spec(std::size_t n, std::size_t m, std::size_t l, std::uint64_t seed, bool vary = true) {
  GeneratorSpec g;
  g.family = Family::Mixed;
  g.n = n;
  g.m = m;
  g.l = l;
  g.seed = seed;
  g.vary_sizes = vary;
  return g;
}

double ratio(const MetricInstance& inst, const Matching& M) { return empirical_distortion(inst, M); }

}  // namespace

TEST(PluralityVeto, SingleCandidate) {
  EXPECT_EQ(plurality_veto(StandardElection({{4}, {4}, {4}})), 4u);
}

TEST(PluralityVeto, UnanimousTopChoiceWins) {
  EXPECT_EQ(plurality_veto(StandardElection({{1, 0, 2}, {1, 2, 0}, {1, 0, 2}})), 1u);
  EXPECT_EQ(plurality_veto(StandardElection({{1, 0, 2}, {1, 2, 0}, {1, 0, 2}}), {2, 0, 1}), 1u);
}

TEST(PluralityVeto, TwoVoterHandSimulation) {
  const StandardElection e({{0, 1}, {1, 0}});
  EXPECT_EQ(plurality_veto(e, {0, 1}), 0u);
  EXPECT_EQ(plurality_veto(e, {1, 0}), 1u);
}

TEST(PluralityVeto, ErrorPaths) {
  EXPECT_THROW(plurality_veto(StandardElection()), std::invalid_argument);
  EXPECT_THROW(plurality_veto(StandardElection({{0, 1}}), {1}), std::invalid_argument);
  EXPECT_THROW(StandardElection({{0, 1}, {0, 2}}), std::invalid_argument);
  EXPECT_THROW(StandardElection({{0, 0}}), std::invalid_argument);
}

TEST(PluralityVeto, WinnerIsWithinThreeOfEveryCandidateOnLiftedCosts) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const MetricInstance inst = generate_instance(spec(8, 5, 1, s));
    const VoterProfile prof = voter_profile(inst);
    std::vector<std::size_t> all(inst.n_candidates());
    for (std::size_t c = 0; c < all.size(); ++c) all[c] = c;
    const std::size_t w = plurality_veto(lift_to_standard(prof, 0, all));
    auto lifted = [&](std::size_t c) {
      double sum = 0.0;
      for (std::size_t v = 0; v < inst.n_voters(); ++v) sum += inst.voter_candidate(v, c) + inst.candidate_position(c, 0);
      return sum;
    };
    for (std::size_t c = 0; c < inst.n_candidates(); ++c) EXPECT_LE(lifted(w), 3.0 * lifted(c) + 1e-9);
  }
}

TEST(Lift, AllCandidatesIsIdentity) {
  const VoterProfile prof(3, 2, {{{2, 0, 1}, {0, 1, 2}}, {{1, 2, 0}, {2, 1, 0}}});
  const StandardElection e = lift_to_standard(prof, 1, {0, 1, 2});
  EXPECT_EQ(e.ranking(0), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(e.ranking(1), (std::vector<std::size_t>{2, 1, 0}));
}

TEST(Lift, SingletonAndEmpty) {
  const VoterProfile prof(3, 1, {{{2, 0, 1}}, {{1, 2, 0}}});
  const StandardElection e = lift_to_standard(prof, 0, {1});
  EXPECT_EQ(e.ranking(0), (std::vector<std::size_t>{1}));
  EXPECT_EQ(e.ranking(1), (std::vector<std::size_t>{1}));
  EXPECT_THROW(lift_to_standard(prof, 0, {}), std::invalid_argument);
}

TEST(Lift, MatchesFilterOracle) {
  SplitMix64 rng(7);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const MetricInstance inst = generate_instance(spec(6, 5, 2, s));
    const VoterProfile prof = voter_profile(inst);
    std::vector<std::size_t> subset;
    for (std::size_t c = 0; c < inst.n_candidates(); ++c) {
      if (rng.uniform() < 0.6) subset.push_back(c);
    }
    if (subset.empty()) subset.push_back(0);
    const StandardElection e = lift_to_standard(prof, 0, subset);
    for (std::size_t v = 0; v < inst.n_voters(); ++v) {
      std::vector<std::size_t> expect;
      for (std::size_t c : prof.ranking(v, 0)) {
        if (std::find(subset.begin(), subset.end(), c) != subset.end()) expect.push_back(c);
      }
      EXPECT_EQ(e.ranking(v), expect);
    }
  }
}

TEST(Iterative, SinglePositionIsThePluralityVetoWinner) {
  const VoterProfile prof(2, 1, {{{0, 1}}, {{1, 0}}});
  EXPECT_EQ(iterative_election(prof), Matching{{0}});
}

TEST(Iterative, LastPositionGetsTheLeftover) {
  const VoterProfile prof(2, 2, {{{0, 1}, {0, 1}}, {{0, 1}, {0, 1}}});
  EXPECT_EQ(iterative_election(prof), (Matching{{0, 1}}));
  MechanismConfig cfg;
  cfg.position_order = {1, 0};
  EXPECT_EQ(iterative_election(prof, cfg), (Matching{{1, 0}}));
}

TEST(Iterative, CustomBaseRule) {
  MechanismConfig cfg;
  cfg.base = {"first-voter", 1.0, [](const StandardElection& e) { return e.ranking(0).front(); }};
  const VoterProfile prof(3, 2, {{{2, 0, 1}, {2, 1, 0}}, {{0, 1, 2}, {0, 1, 2}}});
  EXPECT_EQ(iterative_election(prof, cfg), (Matching{{2, 1}}));
  cfg.position_order = {0, 0};
  EXPECT_THROW(iterative_election(prof, cfg), std::invalid_argument);
}

TEST(Iterative, RatioNeverExceedsSeven) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const MetricInstance inst = generate_instance(spec(8, 5, 3, s));
    EXPECT_LE(ratio(inst, iterative_election(voter_profile(inst))), 7.0 + 1e-9) << inst.label();
  }
}

TEST(Serial, SinglePositionTakesItsTopChoice) {
  const MetricInstance inst = MetricInstance::on_line({0.0}, {5.0, 1.0, 3.0}, {2.0});
  const PositionProfile prof = position_profile(inst);
  EXPECT_EQ(serial_dictatorship(prof), Matching{{prof.ranking(0)[0]}});
}

TEST(Serial, CoincidentCandidatesGiveIdentity) {
  const MetricInstance inst = MetricInstance::on_line({0.0}, {1.0, 1.0, 1.0}, {0.0, 2.0, 4.0});
  EXPECT_EQ(serial_dictatorship(position_profile(inst)), (Matching{{0, 1, 2}}));
}

TEST(Serial, PerfectMatchingBound) {
  for (std::size_t m = 2; m <= 4; ++m) {
    const double bound = 3.0 - std::ldexp(1.0, 2 - static_cast<int>(m));
    double worst = 1.0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const MetricInstance inst = generate_instance(spec(6, m, m, 50'000 + s, false));
      const double r = ratio(inst, serial_dictatorship(position_profile(inst)));
      worst = std::max(worst, r);
      EXPECT_LE(r, bound + 1e-9) << inst.label();
    }
    EXPECT_GE(worst, 1.0);
  }
}

TEST(Serial, SinglePositionRatioAtMostThree) {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const MetricInstance inst = generate_instance(spec(6, 5, 1, s));
    const PositionProfile prof = position_profile(inst);
    const Matching M = serial_dictatorship(prof);
    EXPECT_EQ(M[0], prof.ranking(0)[0]);
    EXPECT_LE(ratio(inst, M), 3.0 + 1e-9);
  }
}

TEST(Serial, ShapeChecks) {
  EXPECT_THROW(serial_dictatorship(PositionProfile(1, {{0}, {0}})), std::invalid_argument);
  EXPECT_THROW(serial_dictatorship(PositionProfile(2, {{0, 1}}), {1}), std::invalid_argument);
}

TEST(MinCp, SinglePositionIsArgmin) {
  Table cp(3, 1);
  cp(0, 0) = 2;
  cp(1, 0) = 1;
  cp(2, 0) = 1;
  EXPECT_EQ(min_position_cost_matching(cp), Matching{{1}});
}

TEST(MinCp, NegativeEntryThrows) {
  Table cp(2, 1);
  cp(1, 0) = -0.5;
  EXPECT_THROW(min_position_cost_matching(cp), std::invalid_argument);
}

TEST(MinCp, PerfectMatchingIsOptimal) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const std::size_t m = 1 + s % 5;
    const MetricInstance inst = generate_instance(spec(5, m, m, s, false));
    const Matching M = min_position_cost_matching(inst.candidate_position_table());
    EXPECT_EQ(M, optimal_matching(inst));
    EXPECT_NEAR(ratio(inst, M), 1.0, 1e-12);
  }
}

TEST(MinCp, EqualsEnumerationOnRandomTables) {
  SplitMix64 rng(99);
  for (int t = 0; t < 300; ++t) {
    Table cp(5, 3);
    for (std::size_t c = 0; c < 5; ++c) {
      for (std::size_t p = 0; p < 3; ++p) cp(c, p) = t % 4 == 0 ? static_cast<double>(rng.between(0, 3)) : rng.uniform();
    }
    double best = kInfinity;
    Matching arg;
    for (const Matching& M : all_matchings(5, 3)) {
      double sum = 0.0;
      for (std::size_t p = 0; p < 3; ++p) sum += cp(M[p], p);
      if (sum < best - 1e-12) {
        best = sum;
        arg = M;
      }
    }
    EXPECT_EQ(min_position_cost_matching(cp), arg);
  }
}

TEST(MinCp, PositionPartIsMinimalAcrossAllMatchings) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const MetricInstance inst = generate_instance(spec(4, 5, 3, s));
    const Matching M = min_position_cost_matching(inst.candidate_position_table());
    const double mine = cost_of_matching(inst, M).position_part;
    for (const Matching& other : all_matchings(inst.n_candidates(), inst.n_positions())) {
      EXPECT_LE(mine, cost_of_matching(inst, other).position_part + 1e-9 * (1 + mine));
    }
  }
}

TEST(LocationRule, Degenerate) {
  EXPECT_EQ(two_candidate_location_rule(5.0, 1.0, {3, 0}), PairSide::A);
  EXPECT_EQ(two_candidate_location_rule(0.5, 1.0, {0, 3}), PairSide::B);
  EXPECT_EQ(two_candidate_location_rule(2.0, 2.0, {1, 1}), PairSide::A);
  EXPECT_THROW(two_candidate_location_rule(-1.0, 1.0, {1, 1}), std::invalid_argument);
}

TEST(LocationRule, WrongChoiceOnTheTieInstanceApproachesFiveThirds) {
  const LowerBoundInstance lb = lower_bound_instance("loc-vp-fig6", 1e-4);
  const InfoSet info = make_info(lb.instance, InfoKind::LOC_VP);
  const Matching M = pair_location(info.location->cp, *info.voters);
  EXPECT_EQ(M, lb.forced_choice);
  const double r = ratio(lb.instance, M);
  EXPECT_LE(r, 5.0 / 3.0);
  EXPECT_NEAR(r, 5.0 / 3.0, 1e-4);
}

TEST(LocationRule, PairRatioAtMostFiveThirds) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const MetricInstance inst = generate_instance(spec(7, 2, 1, s, false));
    const Matching M = pair_location(inst.candidate_position_table(), voter_profile(inst));
    EXPECT_LE(ratio(inst, M), 5.0 / 3.0 + 1e-9) << inst.label();
  }
}

TEST(HybridRule, Degenerate) {
  EXPECT_EQ(two_candidate_hybrid_rule({4, 0}), PairSide::A);
  EXPECT_EQ(two_candidate_hybrid_rule({1, 3}), PairSide::B);
  EXPECT_EQ(two_candidate_hybrid_rule({1, 2}), PairSide::A);
  EXPECT_EQ(two_candidate_hybrid_rule({0, 0}), PairSide::A);
}

TEST(HybridRule, FamilyRatioApproachesTwo) {
  const LowerBoundInstance lb = lower_bound_instance("hybrid-fig5", 1e-4);
  const Matching M = pair_hybrid(position_profile(lb.instance), voter_profile(lb.instance));
  EXPECT_EQ(M, lb.forced_choice);
  const double r = ratio(lb.instance, M);
  EXPECT_LE(r, 2.0);
  EXPECT_NEAR(r, 2.0, 1e-3);
}

TEST(HybridRule, PairRatioAtMostTwo) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const MetricInstance inst = generate_instance(spec(7, 2, 1, 9000 + s, false));
    const Matching M = pair_hybrid(position_profile(inst), voter_profile(inst));
    EXPECT_LE(ratio(inst, M), 2.0 + 1e-9) << inst.label();
  }
}

TEST(Tournament, SingleCandidate) {
  Table cp(1, 1, 3.0);
  EXPECT_EQ(tournament_location_rule(cp, VoterProfile(1, 1, {{{0}}})), 0u);
}

TEST(Tournament, TwoCandidatesMatchThePairRule) {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const MetricInstance inst = generate_instance(spec(5, 2, 1, 300 + s, false));
    const Table cp = inst.candidate_position_table();
    const VoterProfile prof = voter_profile(inst);
    EXPECT_EQ(tournament_location_rule(cp, prof), pair_location(cp, prof)[0]);
  }
}

TEST(Tournament, BoundKingPathAndOutDegree) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GeneratorSpec g = spec(7, 6, 1, 4000 + s);
    const MetricInstance inst = generate_instance(g);
    const Table cp = inst.candidate_position_table();
    const VoterProfile prof = voter_profile(inst);
    const std::size_t w = tournament_location_rule(cp, prof);
    EXPECT_LE(ratio(inst, Matching{{w}}), 25.0 / 9.0 + 1e-9) << inst.label();
    const Tournament t = location_tournament(cp, prof, 0);
    const std::size_t m = inst.n_candidates();
    EXPECT_GE(2 * t.out_degree(w) + 1, m);
    const std::size_t o = optimal_matching(inst)[0];
    if (o != w) {
      bool reach = t.beats[w][o];
      for (std::size_t x = 0; x < m && !reach; ++x) reach = t.beats[w][x] && t.beats[x][o];
      EXPECT_TRUE(reach) << inst.label();
    }
  }
}
