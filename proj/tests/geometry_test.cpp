#include "ndg/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ndg;

namespace {

SnappedPointSet lattice(std::vector<Point> pts) { return snap(pts, 1.0); }

SnappedPointSet random_lattice_set(std::mt19937_64& gen, std::size_t max_points, int side) {
  const std::size_t count = gen() % (max_points + 1);
  std::vector<Point> pts;
  for (std::size_t k = 0; k < count; ++k)
    pts.push_back({static_cast<double>(gen() % side), static_cast<double>(gen() % side)});
  return lattice(pts);
}

}  // namespace

TEST(Snap, Examples) {
  const std::vector<Point> one{{0.01, 0.02}};
  const auto a = snap(one, 0.1);
  ASSERT_EQ(a.points.size(), 1u);
  EXPECT_EQ(a.points[0], (LatticePoint{0, 0}));

  const std::vector<Point> two{{0.04, 0}, {0.06, 0}};
  const auto b = snap(two, 0.1);
  ASSERT_EQ(b.points.size(), 2u);
  EXPECT_EQ(b.points[0], (LatticePoint{0, 0}));
  EXPECT_EQ(b.points[1], (LatticePoint{1, 0}));

  const std::vector<Point> spread{{0, 0}, {1, 0}, {0.5, 3}, {7, 7}, {7, 7.25}};
  EXPECT_EQ(snap(spread, 1e-9).points.size(), spread.size());
  EXPECT_THROW(snap(spread, 0.0), Error);
  EXPECT_THROW(snap(spread, -1.0), Error);
}

TEST(Snap, LatticePointsLieWithinHalfCell) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<Point> pts(500);
  for (auto& p : pts) p = {u(gen), u(gen)};
  const auto s = snap(pts, 0.3, {0.1, -0.2});
  for (const auto& lp : s.points) {
    const Point c = s.to_plane(lp);
    const bool hit = std::any_of(pts.begin(), pts.end(), [&](const Point& p) {
      return std::max(std::abs(p.x - c.x), std::abs(p.y - c.y)) <= 0.15 + 1e-12;
    });
    EXPECT_TRUE(hit);
  }
}

TEST(Witness, FivePointExample) {
  const auto s = lattice({{0, 0}, {0, 2}, {2, 0}, {2, 2}, {1, 1}});
  const auto w = find_rectangle_witness(s);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->i1, 0);
  EXPECT_EQ(w->i2, 2);
  EXPECT_EQ(w->j1, 0);
  EXPECT_EQ(w->j2, 2);
  EXPECT_EQ(w->interior, (LatticePoint{1, 1}));
  EXPECT_TRUE(witness_is_valid(s, *w));
}

TEST(Witness, CornersWithoutInterior) {
  EXPECT_FALSE(find_rectangle_witness(lattice({{0, 0}, {0, 2}, {2, 0}, {2, 2}})));
  // boundary points are not interior
  EXPECT_FALSE(find_rectangle_witness(lattice({{0, 0}, {0, 2}, {2, 0}, {2, 2}, {1, 0}, {0, 1}, {1, 2}})));
  EXPECT_FALSE(find_rectangle_witness(SnappedPointSet{}));
}

TEST(Witness, Fig1aHasNone) {
  const auto pts = support_points(builtin_spec("fig1a"), 0.01);
  EXPECT_FALSE(find_rectangle_witness(snap(pts, 0.05)));
}

TEST(Witness, FatCantorHasOne) {
  const auto pts = support_points(builtin_spec("fat-cantor", BuiltinParams::with_depth(5)), std::ldexp(1.0, -10));
  const auto s = snap(pts, std::ldexp(1.0, -8));
  const auto w = find_rectangle_witness(s);
  ASSERT_TRUE(w);
  EXPECT_TRUE(witness_is_valid(s, *w));
}

TEST(BruteForce, Examples) {
  std::vector<Point> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) grid.push_back({double(i), double(j)});
  const auto w = brute_force_witness(lattice(grid));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->i1, 0);
  EXPECT_EQ(w->i2, 2);
  EXPECT_EQ(w->j1, 0);
  EXPECT_EQ(w->j2, 2);
  EXPECT_EQ(w->interior, (LatticePoint{1, 1}));

  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Point> four;
    for (int k = 0; k < 4; ++k) four.push_back({double(gen() % 4), double(gen() % 4)});
    EXPECT_FALSE(brute_force_witness(lattice(four)));
  }

  std::vector<Point> many;
  for (int k = 0; k < 201; ++k) many.push_back({double(k), 0.0});
  EXPECT_THROW(brute_force_witness(lattice(many)), Error);
}

TEST(Witness, AgreesWithBruteForce) {
  std::mt19937_64 gen(11);
  int found = 0;
  for (int rep = 0; rep < 600; ++rep) {
    const int side = 3 + static_cast<int>(gen() % 12);
    const std::size_t max_points = rep < 300 ? 40 : 200;
    const auto s = random_lattice_set(gen, max_points, side);
    const auto fast = find_rectangle_witness(s);
    const auto slow = brute_force_witness(s);
    ASSERT_EQ(fast.has_value(), slow.has_value()) << "rep " << rep;
    if (fast) {
      ++found;
      EXPECT_TRUE(witness_is_valid(s, *fast));
      EXPECT_TRUE(witness_is_valid(s, *slow));
    }
  }
  // both outcomes exercised
  EXPECT_GT(found, 50);
  EXPECT_LT(found, 550);
}

TEST(Witness, AddingPointsNeverRemovesWitness) {
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Point> pts;
    bool had = false;
    for (int k = 0; k < 60; ++k) {
      pts.push_back({double(gen() % 8), double(gen() % 8)});
      const bool has = find_rectangle_witness(lattice(pts)).has_value();
      ASSERT_TRUE(has || !had);
      had = has;
    }
  }
}

TEST(Witness, DeterministicChoice) {
  std::mt19937_64 gen(17);
  const auto s = random_lattice_set(gen, 150, 10);
  const auto a = find_rectangle_witness(s);
  const auto b = find_rectangle_witness(s);
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) {
    EXPECT_EQ(a->i1, b->i1);
    EXPECT_EQ(a->i2, b->i2);
    EXPECT_EQ(a->j1, b->j1);
    EXPECT_EQ(a->j2, b->j2);
    EXPECT_EQ(a->interior, b->interior);
  }
}

TEST(Occupancy, UniformFillsGrid) {
  const auto s = draw(builtin_spec("independent-uniform"), 100000, 3);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < s.size(); ++i) pts.push_back({s.xs()[i], s.ys()[i]});
  EXPECT_EQ(occupied_fraction(pts, 0.1, {0, 1, 0, 1}), 1.0);
}

TEST(Occupancy, CurveSupportIsSparse) {
  const auto pts = support_points(builtin_spec("fig1a"), 0.005);
  const double coarse = occupied_fraction(pts, 0.1, {0, 4, 0, 4});
  const double fine = occupied_fraction(pts, 0.05, {0, 4, 0, 4});
  EXPECT_LE(coarse, 0.35);
  EXPECT_LE(fine, coarse);
}

TEST(Occupancy, EdgeCases) {
  EXPECT_EQ(occupied_fraction({}, 0.1, {0, 1, 0, 1}), 0.0);
  const std::vector<Point> p{{0.5, 0.5}};
  EXPECT_THROW(occupied_fraction(p, 0.0, {0, 1, 0, 1}), Error);
  EXPECT_THROW(occupied_fraction(p, 0.1, {0, 0, 0, 1}), Error);
  EXPECT_DOUBLE_EQ(occupied_fraction(p, 0.5, {0, 1, 0, 1}), 0.25);
}
