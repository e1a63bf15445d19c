#include <gtest/gtest.h>

#include <cmath>

#include "lineup/exact.hpp"
#include "lineup/harness.hpp"
#include "lineup/lower_bounds.hpp"

using namespace lineup;

namespace {

// Closed forms written out independently of the library.
double expected(const std::string& name, double e) {
  if (name == "vp-fig2") return (3 - 2 * e) / (1 + 2 * e);
  if (name == "pp-k1" || name == "loc-k1") return (3 - e) / (1 + e);
  if (name == "pp-k1-twin" || name == "loc-k1-twin") return (3 + e) / (1 - e);
  if (name == "hybrid-fig5") return (2 - e) / (1 + e / 3);
  return (10 - e) / (6 + e);
}

}  // namespace

TEST(Families, ReproduceClosedForms) {
  for (auto name : kLowerBoundNames) {
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const LowerBoundInstance lb = lower_bound_instance(name, eps);
      EXPECT_TRUE(validate_metric(lb.instance).accepted());
      const double r = empirical_distortion(lb.instance, lb.forced_choice);
      const double want = expected(std::string(name), eps);
      EXPECT_NEAR(r, want, 1e-9 * want) << name << " " << eps;
      EXPECT_NEAR(lower_bound_closed_form(name, eps), want, 1e-15 * want);
    }
  }
}

TEST(Families, ConvergeMonotonicallyToTheLimit) {
  for (auto name : kLowerBoundNames) {
    const bool from_above = std::string(name).ends_with("-twin");
    double prev = from_above ? kInfinity : 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const LowerBoundInstance lb = lower_bound_instance(name, eps);
      const double r = empirical_distortion(lb.instance, lb.forced_choice);
      if (from_above) {
        EXPECT_LT(r, prev);
        EXPECT_GT(r, lb.limit);
      } else {
        EXPECT_GT(r, prev);
        EXPECT_LE(r, lb.limit);
      }
      EXPECT_NEAR(r, lb.limit, 10 * eps * lb.limit);
      prev = r;
    }
  }
}

TEST(Families, MechanismsMakeTheForcedChoice) {
  const double eps = 1e-3;
  {
    const LowerBoundInstance lb = lower_bound_instance("vp-fig2", eps);
    EXPECT_EQ(iterative_election(voter_profile(lb.instance)), lb.forced_choice);
  }
  for (const char* name : {"pp-k1"}) {
    const LowerBoundInstance lb = lower_bound_instance(name, eps);
    EXPECT_EQ(serial_dictatorship(position_profile(lb.instance)), lb.forced_choice);
  }
  for (const char* name : {"loc-k1"}) {
    const LowerBoundInstance lb = lower_bound_instance(name, eps);
    EXPECT_EQ(min_position_cost_matching(lb.instance.candidate_position_table()), lb.forced_choice);
  }
  {
    const LowerBoundInstance lb = lower_bound_instance("hybrid-fig5", eps);
    EXPECT_EQ(pair_hybrid(position_profile(lb.instance), voter_profile(lb.instance)), lb.forced_choice);
  }
  {
    const LowerBoundInstance lb = lower_bound_instance("loc-vp-fig6", eps);
    EXPECT_EQ(pair_location(lb.instance.candidate_position_table(), voter_profile(lb.instance)), lb.forced_choice);
  }
}

TEST(Families, TwinsShareInformationButNotTheAnswer) {
  const double eps = 1e-3;
  for (const char* base : {"pp-k1", "loc-k1"}) {
    const LowerBoundInstance a = lower_bound_instance(base, eps);
    const LowerBoundInstance b = lower_bound_instance(std::string(base) + "-twin", eps);
    EXPECT_EQ(position_profile(a.instance), position_profile(b.instance));
    EXPECT_EQ(a.instance.candidate_position_table(), b.instance.candidate_position_table());
    EXPECT_NE(optimal_matching(a.instance), optimal_matching(b.instance));
  }
}

TEST(Families, BadArguments) {
  EXPECT_THROW(lower_bound_instance("nope", 1e-3), std::invalid_argument);
  EXPECT_THROW(lower_bound_instance("vp-fig2", 0.0), std::invalid_argument);
  EXPECT_THROW(lower_bound_instance("vp-fig2", 0.125), std::invalid_argument);
  EXPECT_THROW(lower_bound_instance("vp-fig2", -1e-3), std::invalid_argument);
  EXPECT_THROW(lower_bound_closed_form("nope", 1e-3), std::invalid_argument);
}

TEST(FBound, CentreValue) { EXPECT_NEAR(f_bound(1, 1), 5.0 / 3.0, 1e-15); }

TEST(FBound, VanishingSecondArgument) { EXPECT_NEAR(f_bound(1, 1e-9), 1.0, 1e-6); }

TEST(FBound, GridMaximumAndHomogeneity) {
  double best = 0.0, bx = 0.0, by = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    for (int j = 1; j <= 1000; ++j) {
      const double x = i * 1e-3, y = j * 1e-3;
      const double f = f_bound(x, y);
      if (f > best) {
        best = f;
        bx = x;
        by = y;
      }
      if ((i * 7 + j) % 97 == 0) {
        for (double lambda : {2.0, 10.0}) EXPECT_NEAR(f_bound(lambda * x, lambda * y), f, 1e-12);
      }
    }
  }
  EXPECT_LE(best, 5.0 / 3.0 + 1e-9);
  EXPECT_NEAR(best, 5.0 / 3.0, 1e-6);
  EXPECT_NEAR(bx, by, 1e-12);
}

TEST(FBound, NonpositiveThrows) {
  EXPECT_THROW(f_bound(0, 1), std::invalid_argument);
  EXPECT_THROW(f_bound(1, -1), std::invalid_argument);
  EXPECT_THROW(f_bound(std::nan(""), 1), std::invalid_argument);
}
