#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace stablerank;
using namespace testing_support;

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::map<GridPoint, std::size_t> single(const GridPoint& v) { return {{v, 1}}; }

}  // namespace

TEST(FreeModuleTest, GeneratorAtOriginIsConstant) {
  Frame f = free_module({2, 2}, PrimeField(2), {{{0, 0}, 1}});
  for (std::size_t idx = 0; idx < f.point_count(); ++idx) EXPECT_EQ(f.dim_at(idx), 1u);
  EXPECT_TRUE(f.map({0, 0}, {2, 2}) == Matrix::identity(1, PrimeField(2)));
}

TEST(FreeModuleTest, TwoGenerators) {
  Frame f = free_module({2, 2}, PrimeField(2), {{{1, 0}, 1}, {{0, 1}, 1}});
  EXPECT_EQ(f.dim({0, 0}), 0u);
  EXPECT_EQ(f.dim({1, 0}), 1u);
  EXPECT_EQ(f.dim({0, 1}), 1u);
  EXPECT_EQ(f.dim({1, 1}), 2u);
  EXPECT_EQ(f.dim({2, 2}), 2u);
  EXPECT_EQ(f.dim({7, 7}), 2u);  // constant past the box
  auto gens = minimal_generators(f);
  ASSERT_EQ(gens.size(), 2u);
  std::set<GridPoint> at{gens[0].at, gens[1].at};
  EXPECT_EQ(at, (std::set<GridPoint>{{1, 0}, {0, 1}}));
}

TEST(FreeModuleTest, EmptyListIsZero) { EXPECT_TRUE(free_module({1, 1}, PrimeField(3), {}).is_zero()); }

TEST(BarTest, DimsAndBetti) {
  Frame f = bar_module({0}, {2}, PrimeField(2));
  EXPECT_EQ(f.dim({0}), 1u);
  EXPECT_EQ(f.dim({1}), 1u);
  EXPECT_EQ(f.dim({2}), 0u);
  EXPECT_EQ(f.dim({9}), 0u);
  EXPECT_EQ(betti_diagram(f, 0).entries, single({0}));
  EXPECT_EQ(betti_diagram(f, 1).entries, single({2}));
  EXPECT_EQ(euler_characteristic(f), 0);
  auto gens = minimal_generators(f);
  ASSERT_EQ(gens.size(), 1u);
  EXPECT_EQ(gens[0].at, GridPoint{0});
}

TEST(BarTest, TwoParameterBar) {
  Frame f = bar_module({0, 1}, {2, 2}, PrimeField(3));
  f.validate();
  EXPECT_EQ(betti_diagram(f, 0).entries, single({0, 1}));
  EXPECT_EQ(betti_diagram(f, 1).entries, single({2, 2}));
  EXPECT_EQ(betti_rank(f, 2), 0u);
  EXPECT_EQ(euler_characteristic(f), 0);
}

TEST(BarTest, RejectsNonIncreasingEndpoints) {
  EXPECT_THROW(bar_module({2}, {1}, PrimeField(2)), PreconditionError);
  EXPECT_THROW(bar_module({1}, {1}, PrimeField(2)), PreconditionError);
}

TEST(DirectSumTest, Examples) {
  PrimeField f2(2);
  Frame a = bar_module({0}, {1}, f2);
  Frame s = direct_sum(a, a);
  EXPECT_EQ(s.dim({0}), 2u);
  EXPECT_EQ(s.dim({1}), 0u);
  EXPECT_TRUE(same_dims(direct_sum(a, zero_frame(1, f2)), a));
  Frame b = free_module({2}, f2, {{{1}, 2}});
  EXPECT_EQ(betti_rank(direct_sum(a, b), 0), betti_rank(a, 0) + betti_rank(b, 0));
  EXPECT_THROW(direct_sum(a, bar_module({0}, {1}, PrimeField(3))), PreconditionError);
}

// Closed forms: beta(K(w,-)) = w in degree 0; beta_n(U_w) sits at w + e_S, |S| = n.
TEST(BettiClosedFormTest, FreeAndSimpleModules) {
  for (std::uint32_t p : {2u, 3u})
    for (std::size_t r = 1; r <= 3; ++r) {
      PrimeField f(p);
      GridPoint w(r, 1);
      Frame k = free_bar(w, f);
      EXPECT_EQ(betti_diagram(k, 0).entries, single(w));
      for (std::size_t n = 1; n <= r; ++n) EXPECT_TRUE(betti_diagram(k, n).entries.empty());
      EXPECT_EQ(euler_characteristic(k), 1);

      Frame u = simple_module(w, f);
      for (std::size_t n = 0; n <= r; ++n) {
        auto d = betti_diagram(u, n);
        EXPECT_EQ(d.rank(), choose(r, n)) << "r=" << r << " n=" << n;
        for (const auto& [v, m] : d.entries) {
          EXPECT_EQ(m, 1u);
          int excess = 0;
          for (std::size_t i = 0; i < r; ++i) {
            EXPECT_TRUE(v[i] == w[i] || v[i] == w[i] + 1);
            excess += v[i] - w[i];
          }
          EXPECT_EQ(excess, static_cast<int>(n));
        }
      }
      EXPECT_EQ(euler_characteristic(u), 0);
    }
}

TEST(KoszulTest, DifferentialsSquareToZeroAndEulerIdentity) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    PrimeField f(trial % 2 ? 3 : 2);
    std::size_t r = 1 + trial % 3;
    Frame fr = random_module(rng, r, 2, 3, f);
    detail::for_each_point_upto(fr.box(), [&](const GridPoint& v) {
      auto k = koszul_at(fr, v);
      std::int64_t chain = 0, homology = 0;
      for (std::size_t i = 0; i <= k.max_degree(); ++i) {
        chain += (i % 2 ? -1 : 1) * static_cast<std::int64_t>(k.term_dims[i]);
        homology += (i % 2 ? -1 : 1) * static_cast<std::int64_t>(k.homology_dim(i));
        if (i >= 2) EXPECT_TRUE((k.differentials[i - 1] * k.differentials[i]).is_zero());
      }
      EXPECT_EQ(chain, homology);
    });
  }
}

TEST(KoszulTest, ZeroFrameHasZeroComplex) {
  auto k = koszul_at(zero_frame(2, PrimeField(2)), {1, 1});
  for (auto d : k.term_dims) EXPECT_EQ(d, 0u);
}

TEST(BettiTest, AdditivityAndGeneratorCount) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    PrimeField f(2);
    Frame a = random_module(rng, 2, 2, 2, f), b = random_module(rng, 2, 2, 2, f);
    Frame s = direct_sum(a, b);
    for (std::size_t n = 0; n <= 2; ++n) {
      auto da = betti_diagram(a, n).entries, db = betti_diagram(b, n).entries, ds = betti_diagram(s, n).entries;
      for (const auto& [v, m] : db) da[v] += m;
      EXPECT_EQ(da, ds);
    }
    EXPECT_EQ(minimal_generators(a).size(), betti_rank(a, 0));
    EXPECT_TRUE(same_dims(submodule_generated(a, minimal_generators(a)).frame, a));
  }
}

TEST(BettiTest, NothingPastTheOuterFace) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Frame a = random_module(rng, 2, 2, 3, PrimeField(3));
    GridPoint far = a.box();
    for (auto& x : far) x += 2;
    for (std::size_t n = 0; n <= 2; ++n) {
      EXPECT_EQ(koszul_at(a, far).homology_dim(n), 0u);
      for (const auto& [v, m] : betti_diagram(a, n).entries)
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LE(v[i], a.box()[i] + 1);
    }
  }
}

TEST(SubmoduleTest, DiagonalElementOfFreeSum) {
  PrimeField f2(2);
  Frame f = free_module({3}, f2, {{{0}, 2}});
  auto s = submodule_generated(f, {{{0}, {1, 1}}});
  for (int v = 0; v <= 3; ++v) EXPECT_EQ(s.frame.dim({v}), 1u);
  EXPECT_TRUE(submodule_generated(f, {}).frame.is_zero());
}

TEST(BarDecompositionTest, ExplicitSum) {
  PrimeField f2(2);
  Frame f = direct_sum(bar_module({0}, {2}, f2), free_bar({1}, f2));
  Barcode expected;
  expected.finite_bars = {{0, 2}};
  expected.infinite_bars = {1};
  EXPECT_EQ(bar_decomposition(f), expected);
  EXPECT_EQ(bar_decomposition(zero_frame(1, f2)).size(), 0u);
}

TEST(BarDecompositionTest, RanksOfAllStructureMapsMatchBarCounts) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    PrimeField f(trial % 3 == 0 ? 3 : 2);
    Frame fr = random_frame_r1(rng, 5, 3, f);
    Barcode bars = bar_decomposition(fr);
    EXPECT_EQ(bars.size(), betti_rank(fr, 0));
    for (int v = 0; v <= fr.box()[0]; ++v)
      for (int w = v; w <= fr.box()[0] + 1; ++w) EXPECT_EQ(rank(fr.map({v}, {w})), bars_containing(bars, v, w));
    // rebuilding from the bars gives the same rank function
    TameModule rebuilt = module_from_barcode(bars, f);
    for (int v = 0; v <= fr.box()[0]; ++v)
      for (int w = v; w <= fr.box()[0] + 1; ++w)
        EXPECT_EQ(rank(tame_map(rebuilt, {Rational(v)}, {Rational(w)})), rank(fr.map({v}, {w})));
  }
}

TEST(TameTest, HalfResolution) {
  TameModule g(free_bar({1}, PrimeField(2)), Rational(1, 2));
  EXPECT_EQ(tame_evaluate(g, {Rational(1, 3)}), 0u);
  EXPECT_EQ(tame_evaluate(g, {Rational(1, 2)}), 1u);
  EXPECT_EQ(tame_evaluate(g, {Rational(7)}), 1u);
  EXPECT_TRUE(tame_map(g, {Rational(3, 4)}, {Rational(3, 4)}) == Matrix::identity(1, PrimeField(2)));
  EXPECT_EQ(tame_betti_diagram(g, 0), (std::map<RationalPoint, std::size_t>{{{Rational(1, 2)}, 1}}));
}

TEST(TameTest, ConstantOnCubesAndRefinement) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    TameModule g(random_module(rng, 2, 2, 2, PrimeField(2)), Rational(2, 3));
    TameModule h = refine(g, 3);
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        RationalPoint v{Rational(a, 4), Rational(b, 5)};
        RationalPoint corner = g.position(g.grid_index(v));
        EXPECT_EQ(tame_evaluate(g, v), tame_evaluate(g, corner));
        EXPECT_EQ(tame_evaluate(g, v), tame_evaluate(h, v));
      }
    EXPECT_EQ(tame_betti_diagram(g, 1), tame_betti_diagram(h, 1));
  }
}
