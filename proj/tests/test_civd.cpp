#include <doctest.h>

#include <algorithm>

#include "civd.hpp"
#include "test_util.hpp"

using namespace civd;
using namespace civd::test;

TEST_CASE("single point: everything is outside, site is universal") {
  PointSet one = make_points({{0.25, 0.75}});
  BuildOptions opt;
  opt.kind = ModelKind::density;
  opt.beta = 0.25;
  Civd civd = Civd::build(one, opt);
  CHECK(civd.decomposition().cells.empty());
  QueryResult r = civd.query(Point{3.0, -1.0});
  CHECK(r.outside);
  CHECK(r.site == std::vector<std::int32_t>{0});
  CHECK(r.value.magnitude > 0);
  CHECK_THROWS_AS(civd.query(Point{0.25, 0.75}), Error);
}

TEST_CASE("outside the root box the site is the whole set") {
  Rng rng(91);
  PointSet pts = random_points(rng, 20, 2);
  BuildOptions opt;
  opt.kind = ModelKind::density;
  opt.beta = 0.3;
  Civd civd = Civd::build(pts, opt);
  AxisBox root = civd.decomposition().tree.box(0);
  Point q = root.center;
  q[0] += root.edge;  // well outside
  QueryResult r = civd.query(q);
  CHECK(r.outside);
  CHECK(static_cast<int>(r.site.size()) == pts.size());
}

TEST_CASE("density guarantee against the scan oracle on a small instance") {
  Rng rng(92);
  PointSet pts = random_points(rng, 60, 2);
  BuildOptions opt;
  opt.kind = ModelKind::density;
  opt.epsilon = 0.2;
  opt.beta = 0.2;
  Civd civd = Civd::build(pts, opt);
  auto reports = validate_civd(civd, 150, 9);
  int failures = 0;
  for (const auto& r : reports) {
    if (!r.pass) ++failures;
    CHECK(r.ratio <= 1.0 + 1e-9);
  }
  CHECK(failures == 0);
}

TEST_CASE("vector guarantee against the subset oracle on a tiny instance") {
  Rng rng(93);
  PointSet pts = random_points(rng, 10, 2);
  for (double t : {1.0, 2.0}) {
    BuildOptions opt;
    opt.kind = ModelKind::vector;
    opt.t = t;
    opt.epsilon = 0.2;
    opt.beta = 0.2;
    Civd civd = Civd::build(pts, opt);
    auto reports = validate_civd(civd, 120, 15);
    int failures = 0;
    for (const auto& r : reports) {
      if (!r.pass) ++failures;
      CHECK(r.ratio <= 1.0 + 1e-9);
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("four-point square decomposition has the expected shape") {
  PointSet square = make_points({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
  BuildOptions opt;
  opt.kind = ModelKind::density;
  opt.epsilon = 0.1;
  opt.beta = 0.1;
  Civd civd = Civd::build(square, opt);
  const auto& dec = civd.decomposition();
  CHECK(dec.type1_cells > 0);
  CHECK(dec.type2_cells > 0);
  // near each input point some type-1 cell is dominated by that point's leaf
  const auto& tree = civd.distance_tree();
  std::vector<char> covered(4, 0);
  for (const Cell& c : dec.cells) {
    if (c.kind != CellKind::type1) continue;
    if (tree.size(c.dominating) == 1) covered[tree.node(c.dominating).rep] = 1;
  }
  for (int i = 0; i < 4; ++i) CHECK(covered[i] == 1);
}

TEST_CASE("query rejects dimension mismatches and singularities") {
  PointSet pts = make_points({{0.0, 0.0}, {2.0, 0.0}});
  BuildOptions opt;
  opt.kind = ModelKind::density;
  opt.beta = 0.25;
  Civd civd = Civd::build(pts, opt);
  CHECK_THROWS_AS(civd.query(Point{1.0}), Error);
  CHECK_THROWS_AS(civd.query(Point{0.0, 0.0}), Error);
  CHECK_THROWS_AS(civd.query(Point{2.0, 1e-12}), Error);
}
