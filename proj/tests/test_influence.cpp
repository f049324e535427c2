#include <doctest.h>

#include <cmath>

#include "influence.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace civd;
using namespace civd::test;

namespace {
std::vector<WeightedSite> sites_of(std::vector<std::pair<Point, std::int64_t>> xs) {
  std::vector<WeightedSite> out;
  for (auto& [p, m] : xs) out.push_back({p, m});
  return out;
}

Point rotate2(const Point& v, double a) {
  return Point{v[0] * std::cos(a) - v[1] * std::sin(a), v[0] * std::sin(a) + v[1] * std::cos(a)};
}
}  // namespace

TEST_CASE("gamma at half integers") {
  CHECK(gamma_half_integer(0) == doctest::Approx(1.0));
  CHECK(gamma_half_integer(2) == doctest::Approx(1.0));
  CHECK(gamma_half_integer(4) == doctest::Approx(2.0));
  CHECK(gamma_half_integer(1) == doctest::Approx(std::sqrt(M_PI) / 2).epsilon(1e-12));
  CHECK(gamma_half_integer(3) == doctest::Approx(0.75 * std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(ball_volume_constant(2) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
  CHECK(ball_volume_constant(1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eval_vector basics") {
  Point q{0.0, 0.0};
  auto v1 = eval_vector(sites_of({{Point{1.0, 0.0}, 1}}), q, 1.0);
  CHECK(v1.magnitude == doctest::Approx(1.0));
  REQUIRE(v1.direction.has_value());
  CHECK((*v1.direction)[0] == doctest::Approx(1.0));
  CHECK((*v1.direction)[1] == doctest::Approx(0.0));

  auto v2 = eval_vector(sites_of({{Point{1.0, 0.0}, 1}, {Point{-1.0, 0.0}, 1}}), q, 2.0);
  CHECK(v2.magnitude == doctest::Approx(0.0));
  CHECK(!v2.direction.has_value());

  auto v3 = eval_vector(sites_of({{Point{1.0, 0.0}, 1}, {Point{2.0, 0.0}, 1}}), q, 1.0);
  CHECK(v3.magnitude == doctest::Approx(1.5));
  CHECK((*v3.direction)[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS(eval_vector(sites_of({{Point{0.0, 0.0}, 1}}), q, 1.0), Error);
}

TEST_CASE("eval_density basics") {
  Point q{0.0, 0.0};
  auto v1 = eval_density(sites_of({{Point{1.0, 0.0}, 1}}), q, 2);
  CHECK(v1.magnitude == doctest::Approx(1.0 / M_PI));
  CHECK(!v1.direction.has_value());

  auto v3 = eval_density(
      sites_of({{Point{1.0, 0.0}, 1}, {Point{0.0, 1.0}, 1}, {Point{-1.0, 0.0}, 1}}), q, 2);
  CHECK(v3.magnitude == doctest::Approx(3.0 / M_PI));

  // adding one far point collapses the full-set density; the best subset is
  // the three near points, confirmed by the sorted scan
  PointSet pts = make_points({{1, 0}, {0, 1}, {-1, 0}, {10, 0}});
  std::vector<WeightedSite> all;
  for (int i = 0; i < 4; ++i) all.push_back({pts[i], 1});
  CHECK(eval_density(all, q, 2).magnitude == doctest::Approx(4.0 / (100.0 * M_PI)));
  MaxSite best = density_scan_max(pts, q);
  CHECK(best.value == doctest::Approx(3.0 / M_PI));
  CHECK(best.ids == std::vector<std::int32_t>{0, 1, 2});
}

TEST_CASE("delta formulas") {
  auto dens = InfluenceModel::density_model(2, 0.2);
  CHECK(dens.delta(1e-9) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(dens.delta(0.1) == doctest::Approx(std::pow(0.9, -2) - 1.0).epsilon(1e-12));
  // the (1-x)^{-d} branch dominates everywhere in the domain
  for (double x = 0.01; x < 0.6; x += 0.01)
    CHECK(dens.delta(x) == doctest::Approx(std::pow(1.0 - x, -2) - 1.0));

  auto vec = InfluenceModel::vector_model(2, 1.0, 0.2);
  CHECK(vec.delta(0.1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK_THROWS_AS(vec.delta(0.0), Error);
  CHECK_THROWS_AS(vec.delta(1.0), Error);
}

TEST_CASE("Delta and its inverse") {
  auto dens = InfluenceModel::density_model(2, 0.2);
  CHECK(dens.delta_capital(0.0) == 0.0);
  auto vec = InfluenceModel::vector_model(2, 2.0, 0.2);
  CHECK(vec.delta_capital(0.0) == 0.0);

  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    double eps = rng.uniform(0.001, 0.3);
    for (const InfluenceModel* m : {&dens, &vec}) {
      double x = m->delta_capital_inverse(eps);
      CHECK(x < 0.5);
      CHECK(m->delta_capital(x) == doctest::Approx(eps).epsilon(1e-10));
    }
  }

  // golden value frozen from the bisection oracle
  CHECK(dens.delta_capital_inverse(0.2) == doctest::Approx(0.040138).epsilon(1e-4));
}

TEST_CASE("beta selection honors the closing conditions") {
  auto dens = InfluenceModel::density_model(2, 0.2);
  double di = dens.delta_inv_epsilon();
  CHECK(dens.beta() > 0);
  CHECK(1.0 - std::pow(1.0 + dens.beta(), -2) <= di + 1e-12);
  CHECK(dens.beta() <= di / 3 + 1e-12);

  auto vec = InfluenceModel::vector_model(2, 1.0, 0.2);
  CHECK(vec.beta() == doctest::Approx(vec.delta_inv_epsilon()));
  CHECK(vec.beta() < 0.5);

  CHECK_THROWS_AS(InfluenceModel::density_model_with_beta(2, 0.2, 0.6), Error);
}

TEST_CASE("domination polynomial") {
  auto v1 = InfluenceModel::vector_model(2, 1.0, 0.2);
  auto v2 = InfluenceModel::vector_model(2, 2.0, 0.2);
  auto d2 = InfluenceModel::density_model(2, 0.2);
  CHECK(v1.domination_poly(100) == doctest::Approx(100.0));
  CHECK(v2.domination_poly(100) == doctest::Approx(10.0));
  CHECK(d2.domination_poly(64) == doctest::Approx(8.0));
}

TEST_CASE("selection mapping is the identity") {
  auto vec = InfluenceModel::vector_model(2, 1.0, 0.2);
  auto dens = InfluenceModel::density_model(2, 0.2);
  auto sites = sites_of({{Point{1.0, 2.0}, 3}, {Point{0.5, 0.5}, 1}});
  for (const InfluenceModel* m : {&vec, &dens}) {
    auto mapped = selection_map_eta(*m, sites);
    REQUIRE(mapped.size() == sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
      CHECK(mapped[i].location == sites[i].location);
      CHECK(mapped[i].multiplicity == sites[i].multiplicity);
    }
  }
}

TEST_CASE("similarity and translation invariance") {
  Rng rng(22);
  Point q{0.3, -0.4};
  for (int trial = 0; trial < 50; ++trial) {
    int m = 1 + static_cast<int>(rng.below(6));
    std::vector<WeightedSite> sites;
    bool singular = false;
    for (int i = 0; i < m; ++i) {
      Point loc = add(q, Point{rng.uniform(-2, 2), rng.uniform(-2, 2)});
      if (dist(loc, q) < 1e-3) singular = true;
      sites.push_back({loc, 1 + static_cast<std::int64_t>(rng.below(3))});
    }
    if (singular) continue;

    double t = 1.0 + rng.uniform(0, 2);
    double s = rng.uniform(0.3, 3.0);
    double a = rng.uniform(0, 2 * M_PI);
    std::vector<WeightedSite> scaled, rotated;
    for (auto& site : sites) {
      Point v = sub(site.location, q);
      scaled.push_back({add(q, scale(v, s)), site.multiplicity});
      rotated.push_back({add(q, rotate2(v, a)), site.multiplicity});
    }
    double base_v = eval_vector(sites, q, t).magnitude;
    double base_d = eval_density(sites, q, 2).magnitude;
    if (base_v > 1e-12) {
      CHECK(eval_vector(scaled, q, t).magnitude / base_v ==
            doctest::Approx(std::pow(s, -t)).epsilon(1e-9));
      CHECK(eval_vector(rotated, q, t).magnitude / base_v == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(eval_density(scaled, q, 2).magnitude / base_d ==
          doctest::Approx(std::pow(s, -2.0)).epsilon(1e-9));
    CHECK(eval_density(rotated, q, 2).magnitude / base_d == doctest::Approx(1.0).epsilon(1e-9));

    Point w{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    std::vector<WeightedSite> moved;
    for (auto& site : sites) moved.push_back({add(site.location, w), site.multiplicity});
    Point qw = add(q, w);
    CHECK(eval_vector(moved, qw, t).magnitude == doctest::Approx(base_v).epsilon(1e-9));
    CHECK(eval_density(moved, qw, 2).magnitude == doctest::Approx(base_d).epsilon(1e-9));
  }
}

TEST_CASE("density stability envelope under perturbation") {
  Rng rng(23);
  Point q{0.0, 0.0};
  for (int trial = 0; trial < 300; ++trial) {
    int m = 1 + static_cast<int>(rng.below(8));
    std::vector<WeightedSite> sites, pert;
    double eps = rng.uniform(0.01, 0.4);
    for (int i = 0; i < m; ++i) {
      Point p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      if (norm(p) < 0.05) p[0] += 0.1;
      sites.push_back({p, 1});
      double r = norm(p);
      Point jitter{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      double jn = norm(jitter);
      if (jn > 0) jitter = scale(jitter, rng.unit() * eps * r / jn);
      pert.push_back({add(p, jitter), 1});
    }
    double f = eval_density(sites, q, 2).magnitude;
    double fp = eval_density(pert, q, 2).magnitude;
    CHECK(fp >= std::pow(1.0 + eps, -2) * f * (1 - 1e-12));
    CHECK(fp <= std::pow(1.0 - eps, -2) * f * (1 + 1e-12));
  }
}

TEST_CASE("local domination against the oracles") {
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    double eps = 0.25;
    int n_near = 2 + static_cast<int>(rng.below(4));
    int n_far = 2 + static_cast<int>(rng.below(4));
    int n = n_near + n_far;
    double t = 1.0 + static_cast<double>(rng.below(2));
    double pn = std::pow(static_cast<double>(n), 1.0 / t);
    Point q{0.0, 0.0};
    std::vector<std::vector<double>> rows;
    double near_r = 1.0;
    for (int i = 0; i < n_near; ++i) {
      double a = rng.uniform(0, 2 * M_PI);
      double r = near_r * rng.uniform(0.5, 1.0);
      rows.push_back({r * std::cos(a), r * std::sin(a)});
    }
    // far points beyond the polynomial margin of every near point
    double far_r = near_r * std::max(pn, std::sqrt(static_cast<double>(n))) / eps * 2.5;
    for (int i = 0; i < n_far; ++i) {
      double a = rng.uniform(0, 2 * M_PI);
      double r = far_r * rng.uniform(1.0, 2.0);
      rows.push_back({r * std::cos(a), r * std::sin(a)});
    }
    PointSet all = make_points(rows);
    PointSet near_only = make_points({rows.begin(), rows.begin() + n_near});
    MaxSite full = brute_max_vector(all, q, t);
    MaxSite restricted = brute_max_vector(near_only, q, t);
    CHECK(restricted.value > (1.0 - eps) * full.value);
    MaxSite dfull = density_scan_max(all, q);
    MaxSite dnear = density_scan_max(near_only, q);
    CHECK(dnear.value > (1.0 - eps) * dfull.value);
  }
}
