#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "phdim/generators.hpp"
#include "phdim/metric.hpp"
#include "phdim/random.hpp"

using namespace phdim;

TEST(DistanceMatrix, LineOfThreePoints) {
  const auto fms = distance_matrix(PointCloud::from_rows({{0.0}, {1.0}, {3.0}}));
  const double expected[3][3] = {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}};
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(fms(j, k), expected[j][k]);
  }
}

TEST(DistanceMatrix, PythagoreanPair) {
  EXPECT_EQ(distance_matrix(PointCloud::from_rows({{0.0, 0.0}, {3.0, 4.0}}))(0, 1), 5.0);
}

TEST(DistanceMatrix, SinglePoint) {
  const auto fms = distance_matrix(PointCloud::from_rows({{2.0, 7.0}}));
  ASSERT_EQ(fms.size(), 1u);
  EXPECT_EQ(fms(0, 0), 0.0);
}

TEST(DistanceMatrix, AlwaysPassesTriangleCheck) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto fms = distance_matrix(gen_uniform_cube(25, 1 + s % 4, s));
    EXPECT_TRUE(validate_metric(fms, true).ok()) << "seed " << s;
    EXPECT_TRUE(fms.validated());
  }
}

TEST(PointCloud, RejectsNonFiniteAndEmpty) {
  EXPECT_THROW(PointCloud::from_rows({{0.0, NAN}}), InvalidArgument);
  EXPECT_THROW(PointCloud::from_rows({}), InvalidArgument);
  EXPECT_THROW(PointCloud::from_rows({{0.0, 1.0}, {2.0}}), InvalidArgument);
}

TEST(ValidateMetric, EuclideanTriplePasses) {
  auto fms = distance_matrix(PointCloud::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}}));
  EXPECT_TRUE(validate_metric(fms, true).ok());
}

TEST(ValidateMetric, ReportsSymmetryViolation) {
  auto fms = FiniteMetricSpace::from_rows({{0.0, 1.0}, {2.0, 0.0}});
  const auto rep = validate_metric(fms, false);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().kind, MetricViolation::Kind::kSymmetry);
  EXPECT_EQ(rep.violations.front().i, 0u);
  EXPECT_EQ(rep.violations.front().j, 1u);
  EXPECT_FALSE(fms.validated());
}

TEST(ValidateMetric, ReportsTriangleViolationOnlyWhenAsked) {
  auto fms = FiniteMetricSpace::from_rows({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  EXPECT_TRUE(validate_metric(fms, false).ok());
  const auto rep = validate_metric(fms, true);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.violations.front().kind, MetricViolation::Kind::kTriangle);
}

TEST(ValidateMetric, BipartiteLevelOneAllTriples) {
  auto fms = gen_bipartite_space(1);
  EXPECT_TRUE(validate_metric(fms, true).ok());
  // Direct enumeration of all ordered triples.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(fms(i, k), fms(i, j) + fms(j, k));
    }
  }
}

TEST(Hausdorff, Examples) {
  const auto a = PointCloud::from_rows({{0.0}});
  const auto b = PointCloud::from_rows({{0.0}, {1.0}});
  EXPECT_EQ(hausdorff_distance(a, b), 1.0);
  EXPECT_EQ(hausdorff_distance(b, b), 0.0);
  const auto c = PointCloud::from_rows({{0.1}, {0.9}});
  EXPECT_NEAR(hausdorff_distance(b, c), 0.1, 1e-15);
}

TEST(Hausdorff, SymmetricAndZeroOnlyForEqualSets) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = gen_uniform_cube(15, 2, s);
    const auto y = gen_uniform_cube(9, 2, s + 100);
    EXPECT_EQ(hausdorff_distance(x, y), hausdorff_distance(y, x));
    EXPECT_GT(hausdorff_distance(x, y), 0.0);
    // Same set in another order (with a duplicate) is at distance 0.
    std::vector<std::vector<double>> rows;
    for (std::size_t i = x.size(); i-- > 0;) rows.push_back({x.coord(i, 0), x.coord(i, 1)});
    rows.push_back(rows.front());
    EXPECT_EQ(hausdorff_distance(x, PointCloud::from_rows(rows)), 0.0);
  }
}

TEST(EpsilonNet, GreedyExample) {
  const auto net = epsilon_net(PointCloud::from_rows({{0.0}, {0.1}, {1.0}}), 0.5);
  EXPECT_EQ(net, (std::vector<Index>{0, 2}));
}

TEST(EpsilonNet, SmallEpsilonKeepsEverything) {
  const auto pc = gen_uniform_cube(30, 2, 3);
  double dmin = kInfinity;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (std::size_t j = i + 1; j < pc.size(); ++j) dmin = std::min(dmin, euclidean_distance(pc.point(i), pc.point(j)));
  }
  EXPECT_EQ(epsilon_net(pc, dmin).size(), pc.size());
}

TEST(EpsilonNet, SinglePoint) {
  EXPECT_EQ(epsilon_net(PointCloud::from_rows({{4.0, 4.0}}), 10.0), (std::vector<Index>{0}));
}

TEST(EpsilonNet, CoversWithinHalfEpsilon) {
  SplitMix64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto pc = gen_uniform_cube(60, 2, static_cast<std::uint64_t>(t));
    const double eps = rng.uniform(0.02, 0.6);
    const auto net = epsilon_net(pc, eps);
    for (std::size_t i = 0; i < pc.size(); ++i) {
      double best = kInfinity;
      for (Index c : net) best = std::min(best, euclidean_distance(pc.point(i), pc.point(c)));
      EXPECT_LE(best, eps / 2.0) << "point " << i << " eps " << eps;
    }
    for (std::size_t a = 0; a < net.size(); ++a) {
      for (std::size_t b = a + 1; b < net.size(); ++b) {
        EXPECT_GT(euclidean_distance(pc.point(net[a]), pc.point(net[b])), eps / 2.0);
      }
    }
  }
}

TEST(Csv, PointCloudRoundTripIsExact) {
  const auto pc = gen_uniform_cube(40, 3, 9);
  std::stringstream ss;
  write_point_cloud_csv(ss, pc);
  const auto back = read_point_cloud_csv(ss);
  EXPECT_EQ(back.coords(), pc.coords());
  EXPECT_EQ(back.dim(), 3u);
}

TEST(Csv, MetricRoundTripAndInfLiteral) {
  EXPECT_EQ(parse_double("inf"), kInfinity);
  EXPECT_EQ(format_double(kInfinity), "inf");
  EXPECT_THROW(parse_double("1.0x"), InvalidArgument);
  const auto fms = gen_bipartite_space(2);
  std::stringstream ss;
  write_metric_csv(ss, fms);
  const auto back = read_metric_csv(ss);
  ASSERT_EQ(back.size(), fms.size());
  for (std::size_t j = 0; j < fms.size(); ++j) {
    for (std::size_t k = 0; k < fms.size(); ++k) EXPECT_EQ(back(j, k), fms(j, k));
  }
}
