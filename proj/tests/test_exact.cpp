#include <gtest/gtest.h>

#include <set>

#include "lineup/exact.hpp"
#include "lineup/harness.hpp"
#include "lineup/lower_bounds.hpp"

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

Matching random_matching(std::size_t m, std::size_t l, SplitMix64& rng) {
  std::vector<std::size_t> pool(m);
  for (std::size_t c = 0; c < m; ++c) pool[c] = c;
  for (std::size_t i = m; i > 1; --i) std::swap(pool[i - 1], pool[rng.between(0, i - 1)]);
  pool.resize(l);
  return Matching{pool};
}

}  // namespace

TEST(Enumerate, CountsAndOrder) {
  const auto all = all_matchings(4, 2);
  EXPECT_EQ(all.size(), 12u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  EXPECT_EQ(all_matchings(3, 3).size(), 6u);
  EXPECT_EQ(all_matchings(2, 3).size(), 0u);
  EXPECT_EQ(count_injections(5, 3, 1000), 60u);
  EXPECT_EQ(count_injections(12, 12, 1000), 1001u);
}

TEST(Optimal, SingleCandidateSinglePosition) {
  const MetricInstance inst = MetricInstance::on_line({0.3}, {1.0}, {2.0});
  EXPECT_EQ(optimal_matching(inst), Matching{{0}});
  EXPECT_EQ(brute_force_optimal(inst), Matching{{0}});
}

TEST(Optimal, ZeroCostMinimizer) {
  const MetricInstance inst = MetricInstance::on_line({0.0, 0.0}, {0.0, 1.0}, {0.0});
  EXPECT_EQ(brute_force_optimal(inst), Matching{{0}});
  EXPECT_EQ(optimal_matching(inst), Matching{{0}});
}

TEST(Optimal, PicksTheFarCandidateOnTheHybridFamily) {
  const MetricInstance inst = lower_bound_instance("hybrid-fig5", 0.01).instance;
  EXPECT_EQ(optimal_matching(inst), Matching{{1}});
  EXPECT_NEAR(cost_of_matching(inst, Matching{{0}}).total, 3 * (2 - 0.01), 1e-12);
  EXPECT_NEAR(cost_of_matching(inst, Matching{{1}}).total, 3 * (1 + 0.01 / 3), 1e-12);
}

TEST(Optimal, AgreesWithBruteForce) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    GeneratorSpec g = spec(6, 5, 5, s);
    if (s % 5 == 0) g.set_positions = std::make_pair(std::size_t{1}, std::size_t{2});
    const MetricInstance inst = generate_instance(g);
    const Matching a = optimal_matching(inst), b = brute_force_optimal(inst);
    EXPECT_EQ(a, b) << inst.label();
    EXPECT_EQ(cost_of_matching(inst, a).total, cost_of_matching(inst, b).total);
  }
}

TEST(Optimal, TiesResolveLexicographically) {
  // Every matching costs the same.
  const MetricInstance inst = MetricInstance::from_table(2, 4, 2, Table(8, 8), {{{6}}, {{7}}});
  EXPECT_EQ(optimal_matching(inst), (Matching{{0, 1}}));
  EXPECT_EQ(brute_force_optimal(inst), (Matching{{0, 1}}));
}

TEST(Optimal, BruteForceGuard) {
  const MetricInstance inst = MetricInstance::on_line({0}, std::vector<double>(12, 0.0), std::vector<double>(8, 0.0));
  EXPECT_THROW(brute_force_optimal(inst), ResourceLimitError);
  EXPECT_NO_THROW(optimal_matching(inst));
}

TEST(Empirical, OptimumIsOne) {
  const MetricInstance inst = generate_instance(spec(5, 4, 2, 3, false));
  EXPECT_EQ(empirical_distortion(inst, optimal_matching(inst)), 1.0);
}

TEST(Empirical, SplitLineFamily) {
  const double eps = 1e-4;
  const MetricInstance inst = lower_bound_instance("vp-fig2", eps).instance;
  EXPECT_NEAR(empirical_distortion(inst, Matching{{0}}), (3 - 2 * eps) / (1 + 2 * eps), 1e-12);
}

TEST(Empirical, NeverBelowOne) {
  SplitMix64 rng(5);
  for (std::uint64_t s = 0; s < 300; ++s) {
    const MetricInstance inst = generate_instance(spec(6, 5, 3, s));
    EXPECT_GE(empirical_distortion(inst, random_matching(inst.n_candidates(), inst.n_positions(), rng)), 1.0 - 1e-12);
  }
}

TEST(Empirical, ZeroCostConventions) {
  const MetricInstance zero = MetricInstance::from_table(1, 2, 1, Table(4, 4), {{{3}}});
  EXPECT_EQ(empirical_distortion(zero, Matching{{1}}), 1.0);
  const MetricInstance one = MetricInstance::on_line({0.0}, {0.0, 1.0}, {0.0});
  EXPECT_TRUE(std::isinf(empirical_distortion(one, Matching{{1}})));
}

TEST(Transform, IdenticalMatchings) {
  const Matching M{{2, 0, 1}};
  const MatchingTransform t = build_corrected_matching(M, M, 4);
  EXPECT_TRUE(t.s1.empty());
  EXPECT_TRUE(t.s3.empty());
  EXPECT_EQ(t.m2, M);
  for (std::size_t c : M.assignment) EXPECT_EQ(t.f[c], c);
  EXPECT_EQ(t.f[3], kNoCandidate);
}

TEST(Transform, CyclicPerfectMatching) {
  const MatchingTransform t = build_corrected_matching(Matching{{0, 1, 2}}, Matching{{1, 2, 0}}, 3);
  EXPECT_EQ(t.s2, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(t.m2, (Matching{{0, 1, 2}}));
  EXPECT_EQ(t.f, (std::vector<std::size_t>{1, 2, 0}));
}

TEST(Transform, ShapeMismatchThrows) {
  EXPECT_THROW(build_corrected_matching(Matching{{0}}, Matching{{0, 1}}, 3), std::invalid_argument);
  EXPECT_THROW(build_corrected_matching(Matching{{0, 0}}, Matching{{0, 1}}, 3), std::invalid_argument);
}

TEST(Transform, PropertiesHoldOnRandomPairs) {
  SplitMix64 rng(2024);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t m = rng.between(1, 6);
    const std::size_t l = rng.between(1, std::min<std::size_t>(4, m));
    const Matching m1 = random_matching(m, l, rng), ms = random_matching(m, l, rng);
    const MatchingTransform tr = build_corrected_matching(m1, ms, m);
    EXPECT_TRUE(transform_property_failures(tr, m1, ms, m).empty());
    EXPECT_EQ(tr.s1.size(), tr.s3.size());
    // independent re-check of property 1
    std::set<std::size_t> a(tr.m2.assignment.begin(), tr.m2.assignment.end());
    std::set<std::size_t> b(ms.assignment.begin(), ms.assignment.end());
    EXPECT_EQ(a, b);
    // S2 slots are untouched
    for (std::size_t p = 0; p < l; ++p) {
      if (b.count(m1[p])) {
        EXPECT_EQ(tr.m2[p], m1[p]);
      }
    }
  }
}

TEST(Transform, PropertyCheckerCatchesBrokenTransforms) {
  const Matching m1{{0, 1}}, ms{{2, 1}};
  MatchingTransform t = build_corrected_matching(m1, ms, 3);
  MatchingTransform broken = t;
  broken.m2 = Matching{{0, 1}};
  EXPECT_FALSE(transform_property_failures(broken, m1, ms, 3).empty());
  broken = t;
  broken.f[2] = 1;
  EXPECT_FALSE(transform_property_failures(broken, m1, ms, 3).empty());
  broken = t;
  broken.s1.clear();
  EXPECT_FALSE(transform_property_failures(broken, m1, ms, 3).empty());
}

TEST(AlphaBeta, IdenticalMatchingsAreVacuous) {
  const MetricInstance inst = generate_instance(spec(4, 4, 2, 1, false));
  const Matching M = optimal_matching(inst);
  const AlphaBetaReport r = verify_alpha_beta_bound(inst, M, M, {1, 3});
  EXPECT_TRUE(r.hypothesis_holds);
  EXPECT_TRUE(r.conclusion_holds);
  EXPECT_EQ(r.ratio, 1.0);
}

TEST(AlphaBeta, RejectsSmallParameters) {
  const MetricInstance inst = generate_instance(spec(4, 4, 2, 1, false));
  const Matching M = optimal_matching(inst);
  EXPECT_THROW(verify_alpha_beta_bound(inst, M, M, {0.5, 1.0}), std::invalid_argument);
}

TEST(AlphaBeta, SerialDictatorshipSatisfiesOneThree) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const MetricInstance inst = generate_instance(spec(8, 5, 3, s));
    const Matching m1 = serial_dictatorship(position_profile(inst));
    const AlphaBetaReport r = verify_alpha_beta_bound(inst, m1, optimal_matching(inst), {1, 3});
    EXPECT_TRUE(r.hypothesis_holds) << inst.label() << " gap " << r.worst_hypothesis_gap;
    EXPECT_TRUE(r.conclusion_holds);
    EXPECT_LE(r.ratio, 5.0 + 1e-9);
  }
}

TEST(AlphaBeta, IterativeVetoSatisfiesThreeThree) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const MetricInstance inst = generate_instance(spec(8, 5, 3, 77'000 + s));
    const Matching m1 = iterative_election(voter_profile(inst));
    const AlphaBetaReport r = verify_alpha_beta_bound(inst, m1, optimal_matching(inst), {3, 3});
    EXPECT_TRUE(r.conclusion_holds);
    if (r.hypothesis_holds) {
      EXPECT_LE(r.ratio, 7.0 + 1e-9);
    }
  }
}
