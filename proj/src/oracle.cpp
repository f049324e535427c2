#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vector_assignment.hpp"

namespace civd {

namespace {
double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}
}  // namespace

MaxSite brute_max_vector(const PointSet& pts, const Point& q, double t) {
  int n = pts.size();
  if (n > 20) fail(Errc::too_large, "subset oracle capped at n = 20");
  if (n == 0) fail(Errc::empty_input, "empty point set");
  int d = pts.dim();
  std::vector<Point> force(n, Point(d));
  for (int i = 0; i < n; ++i) {
    Point p = pts[i];
    double r = dist(p, q);
    if (r < kTol) fail(Errc::singular_query, "query coincides with an input point");
    double s = std::pow(r, -(t + 1.0));
    for (int k = 0; k < d; ++k) force[i][k] = (p[k] - q[k]) * s;
  }
  // Gray-code walk: one flip per subset.
  Point sum(d);
  double best = -1;
  std::uint32_t best_mask = 0;
  std::uint32_t prev = 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    std::uint32_t gray = s ^ (s >> 1);
    std::uint32_t diff = gray ^ prev;
    int bit = std::countr_zero(diff);
    double sign = (gray >> bit & 1) ? 1.0 : -1.0;
    for (int k = 0; k < d; ++k) sum[k] += sign * force[bit][k];
    prev = gray;
    if (gray == 0) continue;
    double v = norm(sum);
    if (v > best) {
      best = v;
      best_mask = gray;
    }
  }
  MaxSite out;
  out.value = best;
  for (int i = 0; i < n; ++i)
    if (best_mask >> i & 1) out.ids.push_back(i);
  return out;
}

MaxSite hyperplane_max_vector(const PointSet& pts, const Point& q, double t) {
  int n = pts.size();
  if (n == 0) fail(Errc::empty_input, "empty point set");
  int d = pts.dim();
  if (d == 2) {
    std::vector<Point> dirs(n);
    std::vector<double> weights(n, 1.0);
    for (int i = 0; i < n; ++i) dirs[i] = sub(pts[i], q);
    auto [ids, value] = best_halfplane_subset(dirs, weights, t);
    return {std::move(ids), value};
  }
  if (n > 24) fail(Errc::too_large, "hyperplane oracle outside the plane is capped at n = 24");
  std::vector<Point> reps(n);
  for (int i = 0; i < n; ++i) reps[i] = pts[i];
  auto subsets = enumerate_hyperplane_partitions(reps, q);
  MaxSite best;
  best.value = -1;
  std::vector<WeightedSite> sites;
  for (const auto& s : subsets) {
    if (s.empty()) continue;
    sites.clear();
    for (std::int32_t i : s) sites.push_back({pts[i], 1});
    double v = eval_vector(sites, q, t).magnitude;
    if (v > best.value) {
      best.value = v;
      best.ids = s;
    }
  }
  return best;
}

MaxSite density_scan_max(const PointSet& pts, const Point& q) {
  int n = pts.size();
  if (n == 0) fail(Errc::empty_input, "empty point set");
  int d = pts.dim();
  std::vector<std::pair<double, std::int32_t>> by_dist(n);
  for (int i = 0; i < n; ++i) {
    double r = dist(pts[i], q);
    if (r < kTol) fail(Errc::singular_query, "query coincides with an input point");
    by_dist[i] = {r, i};
  }
  std::sort(by_dist.begin(), by_dist.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double c_d = ball_volume_constant(d);
  double best = -1;
  int best_i = 0;
  for (int i = 0; i < n; ++i) {
    double v = c_d * static_cast<double>(n - i) / ipow(by_dist[i].first, d);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  MaxSite out;
  out.value = best;
  for (int i = best_i; i < n; ++i) out.ids.push_back(by_dist[i].second);
  std::sort(out.ids.begin(), out.ids.end());
  return out;
}

}  // namespace civd
