#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phdim/dimension.hpp"
#include "phdim/generators.hpp"

using namespace phdim;

TEST(Sierpinski, InsideTheTriangleHull) {
  const auto pc = gen_sierpinski(5000, 1);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const double x = pc.coord(i, 0), y = pc.coord(i, 1);
    ASSERT_GE(x, 0.0);
    ASSERT_LE(x, 1.0);
    ASSERT_GE(y, 0.0);
    ASSERT_LE(y, std::numbers::sqrt3 / 2.0);
    // Inside the two slanted sides as well.
    ASSERT_LE(y, std::numbers::sqrt3 * x + 1e-12);
    ASSERT_LE(y, std::numbers::sqrt3 * (1.0 - x) + 1e-12);
  }
}

TEST(Sierpinski, DeterministicAndNested) {
  EXPECT_EQ(gen_sierpinski(300, 42), gen_sierpinski(300, 42));
  EXPECT_NE(gen_sierpinski(300, 42), gen_sierpinski(300, 43));
  const auto big = gen_sierpinski(500, 7), small = gen_sierpinski(200, 7);
  for (std::size_t k = 0; k < small.coords().size(); ++k) EXPECT_EQ(small.coords()[k], big.coords()[k]);
}

TEST(Sierpinski, BoxDimensionOfFiftyThousandPoints) {
  const auto est = estimate_box_dimension(gen_sierpinski(50'000, 0), dyadic_scales(7, 3));
  EXPECT_NEAR(est.estimate, std::log(3.0) / std::log(2.0), 0.05);
}

TEST(CantorInterval, TernaryDigitsAvoidOne) {
  const int levels = 6;
  const auto pc = gen_cantor_interval(2000, levels, 3);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    double x = pc.coord(i, 0);
    for (int l = 0; l < levels; ++l) {
      x *= 3.0;
      const int digit = static_cast<int>(std::floor(x + 1e-12));
      ASSERT_NE(digit, 1) << "point " << i << " level " << l;
      x -= digit;
    }
    ASSERT_GE(pc.coord(i, 1), 0.0);
    ASSERT_LT(pc.coord(i, 1), 1.0);
  }
}

TEST(CantorInterval, OneLevel) {
  const auto pc = gen_cantor_interval(1000, 1, 5);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const double x = pc.coord(i, 0);
    EXPECT_TRUE((x >= 0.0 && x <= 1.0 / 3.0) || (x >= 2.0 / 3.0 && x <= 1.0)) << x;
  }
}

TEST(CantorInterval, BoxDimensionOnTernaryScales) {
  // Scales aligned with the factor-3 self-similarity of the set.
  const std::vector<double> deltas{1.0 / 9.0, 1.0 / 27.0, 1.0 / 81.0, 1.0 / 243.0};
  const auto est = estimate_box_dimension(gen_cantor_interval(50'000, 12, 0), deltas);
  EXPECT_NEAR(est.estimate, 1.0 + std::log(2.0) / std::log(3.0), 0.06);
}

TEST(Arcs, EndpointFormulasAndSpacing) {
  const auto pc = gen_arcs(4);
  ASSERT_EQ(pc.size(), 4u);
  const double t = std::numbers::pi / 8.0;
  EXPECT_NEAR(pc.coord(0, 0), std::cos(-t), 1e-15);
  EXPECT_NEAR(pc.coord(0, 1), std::sin(-t), 1e-15);
  EXPECT_NEAR(pc.coord(1, 1), std::sin(t), 1e-15);
  EXPECT_NEAR(pc.coord(3, 2), std::sin(t), 1e-15);
}

TEST(Arcs, ThetaZeroPoints) {
  // Odd per-arc count places a sample at theta = 0.
  const auto pc = gen_arcs(6);
  ASSERT_EQ(pc.size(), 6u);
  EXPECT_NEAR(pc.coord(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(pc.coord(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(pc.coord(1, 2), 0.0, 1e-15);
  EXPECT_NEAR(pc.coord(4, 0), 0.0, 1e-15);
  EXPECT_NEAR(pc.coord(4, 1), 0.0, 1e-15);
  EXPECT_NEAR(pc.coord(4, 2), 0.0, 1e-15);
}

TEST(Arcs, PointsLieOnTheirCircles) {
  const auto pc = gen_arcs(101);
  const std::size_t half = pc.size() / 2;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const double x = pc.coord(i, 0), y = pc.coord(i, 1), z = pc.coord(i, 2);
    if (i < half) {
      EXPECT_NEAR(x * x + y * y, 1.0, 1e-14);
      EXPECT_EQ(z, 0.0);
    } else {
      EXPECT_NEAR((1.0 - x) * (1.0 - x) + z * z, 1.0, 1e-14);
      EXPECT_EQ(y, 0.0);
    }
  }
}

TEST(Segment, ThreePoints) {
  EXPECT_EQ(gen_segment(3), PointCloud::from_rows({{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}}));
}

TEST(LatticeSubset, FullDensityTakesEveryPoint) {
  EXPECT_EQ(gen_lattice_subset(2, 2, 1.0, 99),
            PointCloud::from_rows({{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {2.0, 2.0}}));
}

TEST(LatticeSubset, PartialDensityIsDeterministicAndIntegral) {
  const auto a = gen_lattice_subset(6, 3, 0.4, 5);
  EXPECT_EQ(a, gen_lattice_subset(6, 3, 0.4, 5));
  EXPECT_LT(a.size(), 216u);
  for (double v : a.coords()) {
    EXPECT_EQ(v, std::floor(v));
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 6.0);
  }
}

TEST(UniformCube, CoordinatesInHalfOpenUnitInterval) {
  const auto pc = gen_uniform_cube(10'000, 2, 17);
  for (double v : pc.coords()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Bipartite, LevelOneDistances) {
  const auto fms = gen_bipartite_space(1);
  ASSERT_EQ(fms.size(), 4u);
  EXPECT_EQ(fms(0, 1), 0.5);
  EXPECT_EQ(fms(2, 3), 0.5);
  for (std::size_t x : {0u, 1u}) {
    for (std::size_t y : {2u, 3u}) EXPECT_EQ(fms(x, y), 0.25);
  }
}

TEST(Bipartite, LevelZeroFollowsTheCrossDistanceFormula) {
  const auto fms = gen_bipartite_space(0);
  ASSERT_EQ(fms.size(), 2u);
  EXPECT_EQ(fms(0, 1), 0.5);  // 2^{-0-1}
}

TEST(Bipartite, DistancesAreExactPowersAndMetric) {
  for (int level = 0; level <= 5; ++level) {
    auto fms = gen_bipartite_space(level);
    for (std::size_t j = 0; j < fms.size(); ++j) {
      for (std::size_t k = 0; k < fms.size(); ++k) {
        if (j == k) continue;
        const double d = fms(j, k);
        EXPECT_TRUE(d == std::ldexp(1.0, -level - 1) || d == std::ldexp(1.0, -level));
      }
    }
    if (level <= 3) {
      EXPECT_TRUE(validate_metric(fms, true).ok()) << "level " << level;
    }
  }
  EXPECT_THROW(gen_bipartite_space(-1), InvalidArgument);
}

TEST(BipartiteUnion, SizesAndCrossLevelDistance) {
  auto fms = gen_bipartite_union(1);
  ASSERT_EQ(fms.size(), 6u);
  for (std::size_t j : {0u, 1u}) {
    for (std::size_t k = 2; k < 6; ++k) EXPECT_EQ(fms(j, k), 1.0);
  }
  EXPECT_TRUE(validate_metric(fms, true).ok());
  EXPECT_THROW(gen_bipartite_union(12), BudgetExceeded);
}

TEST(BipartiteUnion, PackingCountAtPointThree) {
  // One 4*delta-net centre per level cluster: both clusters have diameter
  // <= 0.5, below the 0.6 separation.
  EXPECT_EQ(ball_packing_count(gen_bipartite_union(1), 0.3), 2u);
}

TEST(GeneratorSpec, DispatchMatchesDirectCalls) {
  GeneratorSpec spec;
  spec.family = Family::kUniformCube;
  spec.n = 50;
  spec.m = 3;
  spec.seed = 8;
  EXPECT_EQ(generate_cloud(spec), gen_uniform_cube(50, 3, 8));
  spec.family = Family::kBipartite;
  spec.level = 2;
  EXPECT_THROW(generate_cloud(spec), InvalidArgument);
  EXPECT_EQ(generate_metric(spec).size(), 8u);
  for (auto f : {Family::kSierpinski, Family::kCantorInterval, Family::kArcs, Family::kUniformCube, Family::kSegment,
                 Family::kLatticeSubset, Family::kBipartite}) {
    EXPECT_EQ(parse_family(family_name(f)), f);
  }
  EXPECT_THROW(parse_family("mandelbrot"), InvalidArgument);
}
