#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace stablerank;
using namespace testing_support;

namespace {

Barcode three_bars() {
  Barcode b;
  b.finite_bars = {{0, 2}, {0, 5}};
  b.infinite_bars = {1};
  return b;
}

StepFunction step(std::vector<Rational> b, std::vector<std::uint64_t> v) { return StepFunction(std::move(b), std::move(v)); }

}  // namespace

TEST(StableRankR1Test, StandardContour) {
  auto g = module_from_barcode(three_bars(), PrimeField(2));
  EXPECT_EQ(stable_rank_r1(g, Contour::standard({1})).step, step({0, 2, 5}, {3, 2, 1}));
}

TEST(StableRankR1Test, TruncatedAtFour) {
  auto g = module_from_barcode(three_bars(), PrimeField(2));
  auto s = stable_rank_r1(g, Contour::truncated(Contour::standard({1}), {4}));
  EXPECT_EQ(s.step, step({0, 2, 3, 4}, {3, 2, 1, 0}));
}

TEST(StableRankR1Test, ZeroModuleIsConstantZero) {
  EXPECT_EQ(stable_rank_r1(TameModule(zero_frame(1, PrimeField(2))), Contour::standard({1})).step,
            StepFunction::constant(0));
}

TEST(StableRankR1Test, RejectsTwoParameters) {
  EXPECT_THROW(stable_rank_r1(TameModule(free_bar({0, 0}, PrimeField(2))), Contour::standard({1, 1})),
               PreconditionError);
}

TEST(StableRankR1Test, MatchesCountingRuleAndBruteForce) {
  std::mt19937 rng(40);
  for (int trial = 0; trial < 40; ++trial) {
    Barcode bars = random_barcode(rng, 4, 6, trial % 2 ? 2 : 1);
    auto g = module_from_barcode(bars, PrimeField(2));
    Rational w = trial % 3 ? Rational(1) : Rational(2);
    std::optional<Rational> u;
    if (trial % 2) u = Rational(uniform(rng, 1, 12), 2);
    Contour c = u ? Contour::truncated(Contour::standard({w}), {*u}) : Contour::standard({w});
    auto f = stable_rank_r1(g, c);
    for (int t = 0; t <= 14; ++t) {
      Rational tau(t, 2);
      EXPECT_EQ(f(tau), counting_rule(bars, w, tau, u));
      if (t % 3 == 0) EXPECT_EQ(stable_rank_bruteforce(g, c, tau), f(tau)) << "trial " << trial << " tau " << tau;
    }
    EXPECT_TRUE(std::is_sorted(f.step.values().rbegin(), f.step.values().rend()));
  }
}

TEST(StableRankBruteForceTest, FreeModule) {
  TameModule k(free_bar({1, 2}, PrimeField(2)));
  Contour c = Contour::truncated(Contour::standard({1, 1}), {4, 4});
  EXPECT_EQ(stable_rank_bruteforce(k, c, 1), 1u);
  EXPECT_EQ(stable_rank_bruteforce(k, c, 2), 1u);
  EXPECT_EQ(stable_rank_bruteforce(k, c, 3), 0u);
}

TEST(StableRankBruteForceTest, MonotoneInTau) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    TameModule g(random_module(rng, 2, 2, 3, PrimeField(2)));
    Contour c = random_contour(rng, 2);
    std::size_t prev = stable_rank_bruteforce(g, c, 0);
    EXPECT_LE(prev, betti_rank(g.frame, 0));
    for (int t = 1; t <= 6; ++t) {
      std::size_t now = stable_rank_bruteforce(g, c, Rational(t, 2));
      EXPECT_LE(now, prev);
      prev = now;
    }
  }
}

TEST(StableRankBruteForceTest, AgreesWithMinRankOfTheReduction) {
  std::mt19937 rng(42);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    TameModule g(random_module(rng, 2, 2, 3, PrimeField(trial % 4 ? 2 : 3)));
    Contour c = random_contour(rng, 2);
    Rational tau(uniform(rng, 1, 8), 2);
    std::optional<MinRankInstance> found;
    try {
      found = reduce_to_minrank(g, c, tau);
    } catch (const PreconditionError&) {
      continue;  // no meeting point
    }
    const MinRankInstance& inst = *found;
    ++compared;
    std::size_t expected = naive_minrank(inst);
    EXPECT_EQ(minrank_solve(inst), expected);
    EXPECT_EQ(stable_rank_bruteforce(g, c, tau), expected);
  }
  EXPECT_GT(compared, 10);
}

TEST(StableRankBruteForceTest, WorkerCountDoesNotChangeTheResult) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    TameModule g(random_module(rng, 2, 2, 3, PrimeField(2)));
    Contour c = random_contour(rng, 2);
    Rational tau(uniform(rng, 0, 6), 2);
    SearchOptions one, four;
    four.jobs = 4;
    EXPECT_EQ(stable_rank_bruteforce(g, c, tau, one), stable_rank_bruteforce(g, c, tau, four));
  }
  auto inst = graph_to_minrank(Graph::cycle(5), PrimeField(2));
  SearchOptions three;
  three.jobs = 3;
  EXPECT_EQ(minrank_solve(inst, three), minrank_solve(inst));
}

TEST(StableRankBruteForceTest, BudgetIsDeterministic) {
  TameModule b = band_functor(band_spec_from_graph(Graph::complete(4), PrimeField(2)));
  Contour c = Contour::standard({1, 1});
  SearchOptions tiny;
  tiny.budget = 10;
  EXPECT_THROW(stable_rank_bruteforce(b, c, 3, tiny), BudgetExceeded);
  EXPECT_THROW(stable_rank_bruteforce(b, c, 3, tiny), BudgetExceeded);
  EXPECT_THROW(minrank_solve(graph_to_minrank(Graph::complete(4), PrimeField(2)), tiny), BudgetExceeded);
}

TEST(StableRankSweepTest, MatchesR1OnSamples) {
  auto g = module_from_barcode(three_bars(), PrimeField(2));
  Contour c = Contour::standard({1});
  auto sweep = stable_rank_sweep(g, c, {1, 2, 3, 5, 6});
  EXPECT_EQ(sweep.step, stable_rank_r1(g, c).step);
}

TEST(ReduceToMinRankTest, BandFunctorGivesItsSubspaces) {
  for (std::size_t n = 1; n <= 3; ++n) {
    PrimeField f2(2);
    Graph x = Graph::path(n + 1);
    BandSpec spec = band_spec_from_graph(x, f2);
    auto inst = reduce_to_minrank(band_functor(spec), Contour::standard({1, 1}), Rational(static_cast<std::int64_t>(n)),
                                  RationalPoint{Rational(static_cast<std::int64_t>(n)), Rational(static_cast<std::int64_t>(n))});
    ASSERT_EQ(inst.targets.size(), n + 1);
    ASSERT_EQ(inst.ambient_dim, n + 1);
    // generators come out ordered by coordinate: (0,n), (1,n-1), ..., i.e. s = n, n-1, ..., 0
    for (std::size_t i = 0; i <= n; ++i) {
      std::size_t s = n - i;
      Vector e(n + 1, 0);
      e[s] = 1;
      EXPECT_EQ(inst.targets[i], e);
      EXPECT_EQ(inst.subspaces[i], spec.subspaces[s]);
    }
  }
}

TEST(ReduceToMinRankTest, FreeModuleExamples) {
  TameModule k(free_bar({1, 1}, PrimeField(2)));
  auto inst = reduce_to_minrank(k, Contour::standard({1, 1}), 1, RationalPoint{1, 1});
  ASSERT_EQ(inst.targets.size(), 1u);
  EXPECT_EQ(inst.subspaces[0].dim(), 0u);
  EXPECT_EQ(minrank_solve(inst), 1u);
  auto gone = reduce_to_minrank(k, Contour::truncated(Contour::standard({1, 1}), {2, 2}), 1, RationalPoint{1, 1});
  EXPECT_EQ(gone.subspaces[0].dim(), 1u);
  EXPECT_EQ(minrank_solve(gone), 0u);
  EXPECT_THROW(reduce_to_minrank(k, Contour::standard({1, 1}), 1, RationalPoint{3, 3}), PreconditionError);
}

TEST(MinRankTest, Examples) {
  PrimeField f2(2);
  MinRankInstance full{3, f2, {{1, 0, 0}, {0, 1, 1}}, {Subspace::full(3, f2), Subspace::full(3, f2)}};
  EXPECT_EQ(minrank_solve(full), 0u);
  MinRankInstance basis{3, f2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {Subspace(3, f2), Subspace(3, f2), Subspace(3, f2)}};
  EXPECT_EQ(minrank_solve(basis), 3u);
  EXPECT_EQ(minrank_solve(graph_to_minrank(Graph(4), f2)), 1u);
  MinRankInstance bad{2, f2, {{1, 0}}, {}};
  EXPECT_THROW(minrank_solve(bad), PreconditionError);
}

TEST(MinRankTest, MatchesNaiveSearchOnRandomInstances) {
  std::mt19937 rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    PrimeField f(trial % 3 ? 2 : 3);
    std::size_t n = uniform(rng, 1, 3), k = uniform(rng, 1, 3);
    MinRankInstance inst{n, f, {}, {}};
    for (std::size_t s = 0; s < k; ++s) {
      Vector x(n);
      for (auto& e : x) e = uniform(rng, 0, f.modulus() - 1);
      inst.targets.push_back(x);
      inst.subspaces.push_back(Subspace::row_space(random_matrix(rng, uniform(rng, 0, n), n, f)));
    }
    EXPECT_EQ(minrank_solve(inst), naive_minrank(inst));
  }
}

TEST(FingerprintTest, Examples) {
  TameModule bar = module_from_barcode(Barcode{{{0, 2}}, {}}, PrimeField(2));
  auto rows = fingerprint_r1(bar, 1, {{1, 3}, {1, 1}});
  EXPECT_EQ(rows[0].value, 1u);
  EXPECT_EQ(rows[1].value, 0u);
  TameModule k = module_from_barcode(Barcode{{}, {0}}, PrimeField(2));
  auto inf = fingerprint_r1(k, 1, {{2, 3}, {2, 2}, {0, Rational(1, 2)}});
  EXPECT_EQ(inf[0].value, 1u);
  EXPECT_EQ(inf[1].value, 0u);
  EXPECT_EQ(inf[2].value, 1u);
  EXPECT_EQ(fingerprint_csv(rows), "tau,u,value\n1,3,1\n1,1,0\n");
  EXPECT_THROW(fingerprint_r1(bar, 0, {}), PreconditionError);
}

// The closed counting rule agrees with the generic shift of the truncated contour.
TEST(FingerprintTest, AgreesWithGenericShift) {
  std::mt19937 rng(45);
  for (int trial = 0; trial < 30; ++trial) {
    Barcode bars = random_barcode(rng, 4, 6);
    auto g = module_from_barcode(bars, PrimeField(2));
    Rational w = trial % 2 ? Rational(1) : Rational(1, 2);
    auto grid = fingerprint_critical_grid({bars}, w);
    auto rows = fingerprint_r1(g, w, grid);
    for (const auto& r : rows) {
      Contour c = Contour::truncated(Contour::standard({w}), {r.u});
      EXPECT_EQ(betti_rank(shift(g, c, r.tau).module().frame, 0), r.value);
    }
  }
}

TEST(FingerprintTest, IsomorphicBarcodesGiveEqualTables) {
  Barcode a, b;
  a.finite_bars = {{0, 2}, {1, 3}};
  a.infinite_bars = {2};
  b.finite_bars = {{1, 3}, {0, 2}};
  b.infinite_bars = {2};
  auto grid = fingerprint_critical_grid({a, b}, 1);
  auto ta = fingerprint_r1(module_from_barcode(a, PrimeField(2)), 1, grid);
  auto tb = fingerprint_r1(module_from_barcode(b, PrimeField(3)), 1, grid);
  EXPECT_EQ(fingerprint_csv(ta), fingerprint_csv(tb));
}

// d(G, G[eps]) <= eps, so the stable rank functions are at most eps apart.
TEST(LipschitzTest, ShiftPairsOneParameter) {
  std::mt19937 rng(46);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = module_from_barcode(random_barcode(rng, 4, 6, 2), PrimeField(2));
    Contour c = random_contour(rng, 1);
    Rational eps(uniform(rng, 0, 6), 2);
    auto shifted = shift(g, c, eps).module();
    auto d = interleaving_distance(stable_rank_r1(g, c).step, stable_rank_r1(shifted, c).step);
    ASSERT_TRUE(d.has_value());
    EXPECT_LE(*d, eps);
  }
}
