#include <doctest.h>

#include "geometry.hpp"
#include "test_util.hpp"

using namespace civd;
using namespace civd::test;

TEST_CASE("dist_point_box basics") {
  AxisBox b{Point{0.0, 0.0}, 2.0};
  CHECK(dist_point_box(Point{0.0, 0.0}, b) == 0.0);
  CHECK(dist_point_box(Point{3.0, 0.0}, b) == doctest::Approx(2.0));
  CHECK(dist_point_box(Point{3.0, 4.0}, b) == doctest::Approx(std::sqrt(13.0)));
  CHECK_THROWS_AS(dist_point_box(Point{1.0}, b), Error);
}

TEST_CASE("dist_point_box matches random-sampling minimizer") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 1 + static_cast<int>(rng.below(3));
    AxisBox b{random_in_box(rng, AxisBox{Point(d), 8.0}), rng.uniform(0.1, 3.0)};
    Point p = random_in_box(rng, AxisBox{Point(d), 12.0});
    double exact = dist_point_box(p, b);
    double best = 1e300;
    for (int s = 0; s < 4000; ++s) {
      Point q = random_in_box(rng, b);
      best = std::min(best, dist(p, q));
    }
    CHECK(exact <= best + 1e-12);
    CHECK(best <= exact + 0.2 * (b.edge + 1e-3));  // sampling is only so sharp
  }
}

TEST_CASE("dist zero iff inside closed box") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + static_cast<int>(rng.below(3));
    AxisBox b{random_in_box(rng, AxisBox{Point(d), 4.0}), rng.uniform(0.1, 2.0)};
    Point p = random_in_box(rng, AxisBox{Point(d), 6.0});
    bool inside = b.contains(p, 0.0);
    CHECK((dist_point_box(p, b) == 0.0) == inside);
  }
}

TEST_CASE("split_box 1-d and 2-d") {
  AxisBox b1{Point{0.0}, 2.0};
  auto c1 = split_box(b1);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].center[0] == doctest::Approx(-0.5));
  CHECK(c1[1].center[0] == doctest::Approx(0.5));
  CHECK(c1[0].edge == doctest::Approx(1.0));

  AxisBox b2{Point{0.0, 0.0}, 2.0};
  auto c2 = split_box(b2);
  REQUIRE(c2.size() == 4);
  for (const auto& c : c2) {
    CHECK(std::abs(c.center[0]) == doctest::Approx(0.5));
    CHECK(std::abs(c.center[1]) == doctest::Approx(0.5));
    CHECK(c.edge == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(split_box(AxisBox{Point{0.0}, 0.0}), Error);
}

TEST_CASE("split_box children tile the parent exactly") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + static_cast<int>(rng.below(3));
    AxisBox b{random_in_box(rng, AxisBox{Point(d), 5.0}), rng.uniform(0.2, 3.0)};
    auto kids = split_box(b);
    int tiling_violations = 0;
    for (int s = 0; s < 10000; ++s) {
      Point p = random_in_box(rng, AxisBox{b.center, b.edge * 1.2});
      int claims = 0;
      for (const auto& c : kids) claims += c.contains_half_open(p);
      if (claims != (b.contains_half_open(p) ? 1 : 0)) ++tiling_violations;
    }
    CHECK(tiling_violations == 0);
    // orthant routing agrees with membership
    Point q = random_in_box(rng, b);
    CHECK(kids[orthant_of(b, q)].contains_half_open(q));
  }
}

TEST_CASE("smallest_enclosing_box") {
  std::vector<Point> single{Point{0.0, 0.0}};
  AxisBox s = smallest_enclosing_box(single);
  CHECK(s.edge == 0.0);
  CHECK(s.center == Point{0.0, 0.0});

  std::vector<Point> two{Point{0.0, 0.0}, Point{2.0, 1.0}};
  AxisBox b = smallest_enclosing_box(two);
  CHECK(b.edge == doctest::Approx(2.0));
  CHECK(b.center[0] == doctest::Approx(1.0));
  CHECK(b.center[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(smallest_enclosing_box(std::vector<Point>{}), Error);
}

TEST_CASE("smallest_enclosing_box containment, minimality, symmetry") {
  Rng rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + static_cast<int>(rng.below(3));
    int n = 2 + static_cast<int>(rng.below(20));
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(random_in_box(rng, AxisBox{Point(d), 4.0}));
    AxisBox b = smallest_enclosing_box(pts);
    double max_low = -1e300;
    for (const Point& p : pts) {
      CHECK(b.contains(p, 1e-12));
      for (int i = 0; i < d; ++i) max_low = std::max(max_low, std::abs(p[i] - b.center[i]));
    }
    // shrinking by any positive amount loses a point
    CHECK(max_low == doctest::Approx(b.edge / 2));

    // translation equivariance
    Point w = random_in_box(rng, AxisBox{Point(d), 10.0});
    std::vector<Point> shifted;
    for (const Point& p : pts) shifted.push_back(add(p, w));
    AxisBox b2 = smallest_enclosing_box(shifted);
    CHECK(b2.edge == doctest::Approx(b.edge));
    for (int i = 0; i < d; ++i) CHECK(b2.center[i] == doctest::Approx(b.center[i] + w[i]));

    // permutation invariance
    std::vector<Point> perm = pts;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.below(i)]);
    AxisBox b3 = smallest_enclosing_box(perm);
    CHECK(b3.edge == b.edge);
    CHECK(b3.center == b.center);
  }
}

TEST_CASE("box_edge_relation") {
  AxisBox b{Point{0.0, 0.0}, 2.0};
  CHECK(box_edge_relation({Point{-2.0, 0.0}, Point{2.0, 0.0}}, b) == EdgeRelation::PassesThrough);
  CHECK(box_edge_relation({Point{0.0, 0.0}, Point{2.0, 0.0}}, b) == EdgeRelation::Cuts);
  CHECK(box_edge_relation({Point{-0.2, 0.0}, Point{0.2, 0.0}}, b) == EdgeRelation::Contained);
  CHECK(box_edge_relation({Point{5.0, 5.0}, Point{6.0, 5.0}}, b) == EdgeRelation::Disjoint);
  // degenerate zero-length edges classify by endpoint membership
  CHECK(box_edge_relation({Point{0.0, 0.0}, Point{0.0, 0.0}}, b) == EdgeRelation::Contained);
  CHECK(box_edge_relation({Point{9.0, 9.0}, Point{9.0, 9.0}}, b) == EdgeRelation::Disjoint);
}

TEST_CASE("region anchor lies inside the region") {
  Rng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + static_cast<int>(rng.below(3));
    AxisBox outer{random_in_box(rng, AxisBox{Point(d), 4.0}), rng.uniform(1.0, 3.0)};
    Region r{outer, std::nullopt};
    if (trial % 2 == 0) {
      AxisBox inner{outer.center, outer.edge};
      inner.edge *= rng.uniform(0.2, 0.8);
      for (int i = 0; i < d; ++i)
        inner.center[i] += rng.uniform(-0.5, 0.5) * (outer.edge - inner.edge) * 0.5;
      r.inner = inner;
    }
    Point a = region_anchor(r);
    CHECK(r.contains_half_open(a));
  }
}

TEST_CASE("pointset rejects bad input") {
  CHECK_THROWS_AS(PointSet({1.0, 2.0, 3.0}, 2), Error);
  CHECK_THROWS_AS(PointSet({1.0, std::numeric_limits<double>::infinity()}, 2), Error);
  PointSet dup({0.0, 0.0, 1.0, 1.0, 0.0, 0.0}, 2);
  auto pair = dup.find_duplicate();
  REQUIRE(pair.has_value());
  CHECK(pair->first == 0);
  CHECK(pair->second == 2);
}
