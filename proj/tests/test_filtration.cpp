#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "phdim/bottleneck.hpp"
#include "phdim/filtration.hpp"
#include "phdim/generators.hpp"
#include "phdim/persistence.hpp"

using namespace phdim;

namespace {

const PointCloud kEquilateral = PointCloud::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}});
const PointCloud kSquare = PointCloud::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});

std::map<std::vector<Index>, double> values_by_simplex(const Filtration& f) {
  std::map<std::vector<Index>, double> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto v = f.vertices(i);
    out[{v.begin(), v.end()}] = f.value(i);
  }
  return out;
}

// Every face of every simplex is present with value <= the simplex value.
void expect_monotone(const Filtration& f) {
  const auto vals = values_by_simplex(f);
  ASSERT_TRUE(f.is_sorted());
  for (const auto& [s, v] : vals) {
    if (s.size() < 2) continue;
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<Index> face;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k != drop) face.push_back(s[k]);
      }
      auto it = vals.find(face);
      ASSERT_NE(it, vals.end());
      EXPECT_LE(it->second, v);
    }
  }
}

}  // namespace

TEST(Rips, EquilateralDistances) {
  const auto f = rips_filtration(FiniteMetricSpace::from_rows({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  ASSERT_EQ(f.count(1), 3u);
  ASSERT_EQ(f.count(2), 1u);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.dim(i) >= 1) {
      EXPECT_EQ(f.value(i), 1.0);
    }
  }
}

TEST(Rips, BipartiteLevelOne) {
  const auto f = rips_filtration(gen_bipartite_space(1));
  std::multiset<double> edges, tris;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.dim(i) == 1) edges.insert(f.value(i));
    if (f.dim(i) == 2) tris.insert(f.value(i));
  }
  EXPECT_EQ(edges.count(0.25), 4u);
  EXPECT_EQ(edges.count(0.5), 2u);
  EXPECT_EQ(tris.size(), 4u);
  EXPECT_EQ(tris.count(0.5), 4u);
}

TEST(Rips, UnitSquareEdges) {
  FiltrationParams fp;
  fp.max_dim = 1;
  const auto vals = values_by_simplex(rips_filtration(distance_matrix(kSquare), fp));
  EXPECT_EQ(vals.at({0, 1}), 1.0);
  EXPECT_EQ(vals.at({1, 2}), 1.0);
  EXPECT_EQ(vals.at({2, 3}), 1.0);
  EXPECT_EQ(vals.at({0, 3}), 1.0);
  EXPECT_DOUBLE_EQ(vals.at({0, 2}), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(vals.at({1, 3}), std::sqrt(2.0));
}

TEST(Rips, MaxScaleTruncatesAndBudgetIsEnforced) {
  const auto fms = distance_matrix(gen_uniform_cube(30, 2, 1));
  FiltrationParams fp;
  fp.max_scale = 0.2;
  const auto f = rips_filtration(fms, fp);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(f.value(i), 0.2);
  fp.max_scale = kInfinity;
  fp.budget = 1000;
  EXPECT_THROW(rips_filtration(fms, fp), BudgetExceeded);
}

TEST(Cech, EquilateralTriangle) {
  const auto vals = values_by_simplex(cech_filtration(kEquilateral));
  EXPECT_DOUBLE_EQ(vals.at({0, 1}), 0.5);
  EXPECT_NEAR(vals.at({1, 2}), 0.5, 1e-15);
  EXPECT_NEAR(vals.at({0, 1, 2}), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Cech, UnitSquare) {
  const auto vals = values_by_simplex(cech_filtration(kSquare));
  EXPECT_EQ(vals.at({0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(vals.at({0, 2}), std::sqrt(2.0) / 2.0);
  EXPECT_DOUBLE_EQ(vals.at({1, 3}), std::sqrt(2.0) / 2.0);
  for (auto t : {std::vector<Index>{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}) {
    EXPECT_NEAR(vals.at(t), std::sqrt(2.0) / 2.0, 1e-12);
  }
}

TEST(Cech, EdgeValuesAreHalfDistancesAndRipsEdgesAreDistances) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto pc = gen_uniform_cube(25, 3, s);
    FiltrationParams fp;
    fp.max_dim = 1;
    const auto c = cech_filtration(pc, fp);
    const auto r = rips_filtration(distance_matrix(pc), fp);
    for (const auto* f : {&c, &r}) {
      for (std::size_t i = 0; i < f->size(); ++i) {
        if (f->dim(i) != 1) continue;
        const auto v = f->vertices(i);
        const double d = euclidean_distance(pc.point(v[0]), pc.point(v[1]));
        EXPECT_EQ(f->value(i), f == &c ? d / 2.0 : d);
      }
    }
  }
}

TEST(Filtration, MonotoneSortedAndStrictlyIncreasingTuples) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto pc = gen_uniform_cube(14, 2, s);
    FiltrationParams fp;
    fp.max_dim = 3;
    expect_monotone(rips_filtration(distance_matrix(pc), fp));
    expect_monotone(cech_filtration(pc, fp));
    expect_monotone(alpha_filtration_2d(gen_uniform_cube(80, 2, s)));
  }
  // Arcs samples hold many nearly degenerate triples.
  FiltrationParams fp;
  fp.max_dim = 3;
  expect_monotone(cech_filtration(gen_arcs(24), fp));
}

TEST(Filtration, RejectsBadSimplices) {
  Filtration f(ComplexKind::kCustom, 2, 4);
  EXPECT_THROW(f.add({2, 1}, 0.5), StructuralError);
  EXPECT_THROW(f.add({0, 5}, 0.5), InvalidArgument);
  EXPECT_THROW(f.add({0, 1}, NAN), InvalidArgument);
  EXPECT_THROW(f.add({0, 1, 2, 3}, 1.0), InvalidArgument);
}

TEST(Filtration, DumpRoundTrip) {
  const auto f = cech_filtration(gen_uniform_cube(8, 2, 4));
  std::stringstream ss;
  f.dump(ss);
  const auto g = Filtration::parse_dump(ss);
  ASSERT_EQ(g.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_EQ(g.value(i), f.value(i));
    EXPECT_TRUE(std::ranges::equal(g.vertices(i), f.vertices(i)));
  }
}

TEST(Alpha, EquilateralMatchesCech) {
  const auto a = persistent_homology(alpha_filtration_2d(kEquilateral));
  const auto h1 = a.degree(1);
  ASSERT_EQ(h1.size(), 1u);
  EXPECT_NEAR(h1[0].birth, 0.5, 1e-12);
  EXPECT_NEAR(h1[0].death, 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Alpha, MatchesCechOnRandomClouds) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto pc = gen_uniform_cube(50, 2, 1000 + s);
    const auto a = persistent_homology(alpha_filtration_2d(pc));
    const auto c = persistent_homology(cech_filtration(pc));
    for (int d : {0, 1}) {
      ASSERT_EQ(a.count(d), c.count(d)) << "seed " << s << " degree " << d;
      const auto x = a.degree(d), y = c.degree(d);
      for (std::size_t k = 0; k < x.size(); ++k) {
        EXPECT_NEAR(x[k].birth, y[k].birth, 1e-9);
        if (x[k].finite()) {
          EXPECT_NEAR(x[k].death, y[k].death, 1e-9);
        }
      }
    }
  }
}

TEST(Alpha, CocircularInputIsJitteredConsistently) {
  // Square grids are maximally cocircular.
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) rows.push_back({0.2 * i, 0.2 * j});
  }
  const auto pc = PointCloud::from_rows(rows);
  const auto a = persistent_homology(alpha_filtration_2d(pc));
  const auto c = persistent_homology(cech_filtration(pc));
  EXPECT_LE(bottleneck_distance(a, c, 0), 1e-8);
  EXPECT_LE(bottleneck_distance(a, c, 1), 1e-8);
  AlphaParams exact;
  exact.jitter_degenerate = false;
  EXPECT_NO_THROW(alpha_filtration_2d(pc, exact));
}

TEST(Alpha, CollinearInputIsAnError) {
  EXPECT_THROW(alpha_filtration_2d(PointCloud::from_rows({{0, 0}, {1, 1}, {2, 2}})), Error);
  EXPECT_THROW(alpha_filtration_2d(gen_uniform_cube(5, 3, 0)), InvalidArgument);
}

TEST(ComplexKind, NamesRoundTrip) {
  for (auto k : {ComplexKind::kRips, ComplexKind::kCech, ComplexKind::kAlpha2d}) {
    EXPECT_EQ(parse_complex(complex_name(k)), k);
  }
  EXPECT_THROW(parse_complex("witness"), InvalidArgument);
}
