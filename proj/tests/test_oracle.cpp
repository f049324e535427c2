#include <doctest.h>

#include <algorithm>

#include "oracle.hpp"
#include "test_util.hpp"

using namespace civd;
using namespace civd::test;

TEST_CASE("brute_max_vector basics") {
  Point q{0.0, 0.0};
  PointSet one = make_points({{2.0, 0.0}});
  auto r1 = brute_max_vector(one, q, 2.0);
  CHECK(r1.value == doctest::Approx(0.25));
  CHECK(r1.ids == std::vector<std::int32_t>{0});

  // antipodal pair at unit distance cancels; a singleton wins
  PointSet anti = make_points({{1.0, 0.0}, {-1.0, 0.0}});
  auto r2 = brute_max_vector(anti, q, 2.0);
  CHECK(r2.value == doctest::Approx(1.0));
  CHECK(r2.ids.size() == 1);

  Rng rng(1);
  PointSet big = random_points(rng, 21, 2);  // over the cap
  CHECK_THROWS_AS(brute_max_vector(big, q, 1.0), Error);
}

TEST_CASE("brute optimum is hyperplane separable") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 4 + static_cast<int>(rng.below(7));
    PointSet pts = random_points(rng, n, 2, 2.0);
    Point q = random_in_box(rng, AxisBox{Point{1.0, 1.0}, 3.0});
    double rmin = 1e300;
    for (int i = 0; i < n; ++i) rmin = std::min(rmin, dist(q, pts[i]));
    if (rmin < 1e-3) continue;
    double t = 1.0 + static_cast<double>(rng.below(2));
    auto best = brute_max_vector(pts, q, t);
    // witness: the hyperplane normal to the optimum influence separates
    std::vector<WeightedSite> sites;
    for (std::int32_t i : best.ids) sites.push_back({pts[i], 1});
    auto f = eval_vector(sites, q, t);
    REQUIRE(f.direction.has_value());
    std::vector<char> in(n, 0);
    for (std::int32_t i : best.ids) in[i] = 1;
    for (int i = 0; i < n; ++i) {
      double dp = 0;
      for (int k = 0; k < 2; ++k) dp += (pts[i][k] - q[k]) * (*f.direction)[k];
      if (in[i])
        CHECK(dp >= -1e-9);
      else
        CHECK(dp <= 1e-9);
    }
  }
}

TEST_CASE("hyperplane sweep oracle agrees with brute force") {
  Rng rng(72);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + static_cast<int>(rng.below(8));
    PointSet pts = random_points(rng, n, 2, 2.0);
    Point q = random_in_box(rng, AxisBox{Point{1.0, 1.0}, 3.0});
    double rmin = 1e300;
    for (int i = 0; i < n; ++i) rmin = std::min(rmin, dist(q, pts[i]));
    if (rmin < 1e-3) continue;
    double t = 1.0 + static_cast<double>(rng.below(2));
    auto sweep = hyperplane_max_vector(pts, q, t);
    auto brute = brute_max_vector(pts, q, t);
    CHECK(sweep.value == doctest::Approx(brute.value).epsilon(1e-9));
  }

  // collinear points on one ray reinforce: the full set wins
  PointSet ray = make_points({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}});
  auto full = hyperplane_max_vector(ray, Point{0.0, 0.0}, 1.0);
  CHECK(full.ids == std::vector<std::int32_t>{0, 1, 2});

  // symmetric cross: one arm (t = 1), value checked against brute force
  PointSet crossed = make_points({{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}});
  auto c = hyperplane_max_vector(crossed, Point{0.0, 0.0}, 1.0);
  auto cb = brute_max_vector(crossed, Point{0.0, 0.0}, 1.0);
  CHECK(c.value == doctest::Approx(cb.value).epsilon(1e-12));
}

TEST_CASE("density scan basics") {
  Point q{0.0, 0.0};
  PointSet one = make_points({{3.0, 4.0}});
  auto r = density_scan_max(one, q);
  CHECK(r.value == doctest::Approx(1.0 / (M_PI * 25.0)));

  PointSet four = make_points({{1, 0}, {0, 1}, {-1, 0}, {10, 0}});
  auto r4 = density_scan_max(four, q);
  CHECK(r4.value == doctest::Approx(3.0 / M_PI));
  CHECK(r4.ids == std::vector<std::int32_t>{0, 1, 2});
  // evaluate all four suffixes by hand: radii 10, 1, 1, 1
  std::vector<double> suffix_density{4.0 / (M_PI * 1e4), 3.0 / M_PI, 2.0 / M_PI, 1.0 / M_PI};
  CHECK(r4.value == doctest::Approx(*std::max_element(suffix_density.begin(), suffix_density.end())));
}

TEST_CASE("density scan equals 2^n enumeration") {
  Rng rng(73);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.below(11));
    int dim = 1 + static_cast<int>(rng.below(3));
    PointSet pts = random_points(rng, n, dim, 2.0);
    Point q = random_in_box(rng, AxisBox{Point(dim), 6.0});
    double rmin = 1e300;
    for (int i = 0; i < n; ++i) rmin = std::min(rmin, dist(q, pts[i]));
    if (rmin < 1e-3) continue;
    auto scan = density_scan_max(pts, q);
    double best = 0;
    double c_d = ball_volume_constant(dim);
    for (int mask = 1; mask < (1 << n); ++mask) {
      double far = 0;
      int cnt = 0;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) {
          far = std::max(far, dist(q, pts[i]));
          ++cnt;
        }
      best = std::max(best, c_d * cnt / std::pow(far, dim));
    }
    CHECK(scan.value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("non-suffix subsets never beat the suffix with the same radius") {
  Rng rng(74);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + static_cast<int>(rng.below(10));
    PointSet pts = random_points(rng, n, 2, 2.0);
    Point q = random_in_box(rng, AxisBox{Point{1.0, 1.0}, 4.0});
    double rmin = 1e300;
    for (int i = 0; i < n; ++i) rmin = std::min(rmin, dist(q, pts[i]));
    if (rmin < 1e-3) continue;
    int mask = 1 + static_cast<int>(rng.below((1u << n) - 1));
    double far = 0;
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) {
        far = std::max(far, dist(q, pts[i]));
        ++cnt;
      }
    // the suffix with the same outer radius has at least as many points
    int suffix_cnt = 0;
    for (int i = 0; i < n; ++i)
      if (dist(q, pts[i]) <= far + 1e-12) ++suffix_cnt;
    CHECK(suffix_cnt >= cnt);
  }
}
