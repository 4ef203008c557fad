#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace stablerank;
using namespace testing_support;

namespace {

RationalMultiset random_multiset(std::mt19937& rng) {
  RationalMultiset m;
  std::size_t n = uniform(rng, 0, 3);
  for (std::size_t i = 0; i < n; ++i) m.add(Rational(uniform(rng, 0, 8), uniform(rng, 1, 2)), uniform(rng, 1, 3));
  return m;
}

StepFunction random_step(std::mt19937& rng) {
  std::vector<StabilizationCandidate> c{{uniform(rng, 0, 5), Rational(0)}};
  std::size_t n = uniform(rng, 0, 3);
  for (std::size_t i = 0; i < n; ++i) c.push_back({uniform(rng, 0, 5), Rational(uniform(rng, 0, 8), uniform(rng, 1, 2))});
  return stabilize(c);
}

}  // namespace

TEST(InterleavingTest, DistanceToItselfIsZero) {
  RationalMultiset f{{Rational(1), 2}, {Rational(3), 1}};
  EXPECT_EQ(interleaving_distance(f, f), Extended(Rational(0)));
}

TEST(InterleavingTest, PointMassesOneApart) {
  RationalMultiset f{{Rational(0), 1}}, g{{Rational(1), 1}};
  EXPECT_FALSE(sampled_eps_close(f, g, Rational(0)));
  EXPECT_FALSE(sampled_eps_close(f, g, Rational(1, 2)));
  EXPECT_TRUE(sampled_eps_close(f, g, Rational(1)));
  EXPECT_EQ(interleaving_distance(f, g), Extended(Rational(1)));
}

// Over non-negative rationals, {0:2} against the empty multiset is eps-close for every eps > 0 but
// not for eps = 0, so the infimum is 0 and is not attained.
TEST(InterleavingTest, MassAtZeroAgainstEmptyHasUnattainedInfimumZero) {
  RationalMultiset f{{Rational(0), 2}}, g;
  EXPECT_FALSE(sampled_eps_close(f, g, Rational(0)));
  EXPECT_TRUE(sampled_eps_close(f, g, Rational(1, 1000)));
  EXPECT_EQ(interleaving_distance(f, g), Extended(Rational(0)));
}

TEST(InterleavingTest, FeasibilityAgreesWithSampledOracle) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_multiset(rng), g = random_multiset(rng);
    Rational eps(uniform(rng, 0, 10), uniform(rng, 1, 4));
    EXPECT_EQ(eps_close(f, g, eps), sampled_eps_close(f, g, eps));
    auto a = random_step(rng), b = random_step(rng);
    EXPECT_EQ(eps_close(a, b, eps), sampled_eps_close(a, b, eps));
  }
}

TEST(InterleavingTest, PseudometricAxiomsOnStepFunctions) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_step(rng), g = random_step(rng), h = random_step(rng);
    auto fg = interleaving_distance(f, g), gh = interleaving_distance(g, h), fh = interleaving_distance(f, h);
    EXPECT_EQ(interleaving_distance(f, f), Extended(Rational(0)));
    EXPECT_EQ(fg, interleaving_distance(g, f));
    if (fg && gh) {
      ASSERT_TRUE(fh.has_value());
      EXPECT_LE(*fh, *fg + *gh);
    }
  }
}

TEST(StabilizeTest, OnlyTheCenter) { EXPECT_EQ(stabilize({{5, Rational(0)}}), StepFunction::constant(5)); }

TEST(StabilizeTest, DropAtTwo) {
  auto s = stabilize({{3, Rational(0)}, {1, Rational(2)}});
  EXPECT_EQ(s.breakpoints(), (std::vector<Rational>{0, 2}));
  EXPECT_EQ(s.values(), (std::vector<std::uint64_t>{3, 1}));
  EXPECT_EQ(s(Rational(19, 10)), 3u);
  EXPECT_EQ(s(Rational(2)), 1u);
}

TEST(StabilizeTest, EqualValuesDoNotCreateBreakpoints) {
  auto s = stabilize({{2, Rational(0)}, {2, Rational(1)}, {0, Rational(3)}});
  EXPECT_EQ(s.breakpoints(), (std::vector<Rational>{0, 3}));
  EXPECT_EQ(s.values(), (std::vector<std::uint64_t>{2, 0}));
}

TEST(StabilizeTest, RejectsEmptyAndCenterless) {
  EXPECT_THROW(stabilize({}), PreconditionError);
  EXPECT_THROW(stabilize({{1, Rational(1)}}), PreconditionError);
}

TEST(StabilizeTest, OutputIsNonIncreasing) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_step(rng);
    EXPECT_TRUE(std::is_sorted(s.values().rbegin(), s.values().rend()));
    EXPECT_TRUE(std::is_sorted(s.breakpoints().begin(), s.breakpoints().end()));
  }
}

TEST(StepFunctionTest, CsvFormat) {
  auto s = stabilize({{3, Rational(0)}, {1, Rational(3, 2)}});
  EXPECT_EQ(s.to_csv(), "tau,value\n0,3\n3/2,1\n");
}
