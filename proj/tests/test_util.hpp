#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace civd::test {

// Uniform points in [0, scale)^d, distinct by rejection.
inline PointSet random_points(Rng& rng, int n, int dim, double scale = 1.0) {
  std::set<std::vector<double>> seen;
  std::vector<double> xs;
  while (static_cast<int>(seen.size()) < n) {
    std::vector<double> row(dim);
    for (int i = 0; i < dim; ++i) row[i] = rng.uniform(0.0, scale);
    if (!seen.insert(row).second) continue;
    xs.insert(xs.end(), row.begin(), row.end());
  }
  return PointSet(std::move(xs), dim);
}

// Hierarchically clustered points: recursive Gaussian-free blobs, the regime
// where the aggregation machinery collapses whole subtrees.
inline PointSet clustered_points(Rng& rng, int n, int dim, double scale = 1.0) {
  std::vector<double> xs;
  std::set<std::vector<double>> seen;
  std::vector<double> center(dim, scale * 0.5);
  double spread = scale * 0.5;
  int placed = 0;
  std::vector<std::vector<double>> centers{center};
  while (placed < n) {
    // pick a center, descend a few levels with shrinking spread
    auto c = centers[rng.below(centers.size())];
    double s = spread;
    int depth = 1 + static_cast<int>(rng.below(5));
    for (int k = 0; k < depth; ++k) {
      for (int i = 0; i < dim; ++i) c[i] += rng.uniform(-s, s);
      s *= 0.2;
    }
    if (centers.size() < 16 && rng.below(3) == 0) centers.push_back(c);
    std::vector<double> row(dim);
    for (int i = 0; i < dim; ++i) row[i] = c[i] + rng.uniform(-s, s);
    if (!seen.insert(row).second) continue;
    xs.insert(xs.end(), row.begin(), row.end());
    ++placed;
  }
  return PointSet(std::move(xs), dim);
}

inline PointSet make_points(std::vector<std::vector<double>> rows) {
  std::vector<double> xs;
  int dim = static_cast<int>(rows[0].size());
  for (auto& r : rows) xs.insert(xs.end(), r.begin(), r.end());
  return PointSet(std::move(xs), dim);
}

inline Point random_in_box(Rng& rng, const AxisBox& b) {
  Point p(b.dim());
  for (int i = 0; i < b.dim(); ++i) p[i] = rng.uniform(b.lo(i), b.hi(i));
  return p;
}

inline Point random_in_region(Rng& rng, const Region& r) {
  // Box differences sample a slab picked by volume, never by rejection: thin
  // shells would loop.
  if (!r.inner) return random_in_box(rng, r.outer);
  const AxisBox& out = r.outer;
  const AxisBox& in = *r.inner;
  int d = out.dim();
  struct Slab {
    int axis;
    double lo, hi;  // interval on `axis`
    double vol;
  };
  // Disjoint slab decomposition: axis a splits off [out.lo, in.lo) and
  // (in.hi, out.hi] with earlier axes clamped to the inner interval.
  std::vector<Slab> slabs;
  double clamp_prod = 1.0;
  double total = 0.0;
  for (int a = 0; a < d; ++a) {
    double lo_th = in.lo(a) - out.lo(a);
    double hi_th = out.hi(a) - in.hi(a);
    double cross = clamp_prod;
    for (int b2 = a + 1; b2 < d; ++b2) cross *= out.edge;
    if (lo_th > 0) {
      slabs.push_back({a, out.lo(a), in.lo(a), lo_th * cross});
      total += lo_th * cross;
    }
    if (hi_th > 0) {
      slabs.push_back({a, in.hi(a), out.hi(a), hi_th * cross});
      total += hi_th * cross;
    }
    clamp_prod *= std::max(0.0, in.hi(a) - in.lo(a));
    if (clamp_prod <= 0) break;
  }
  double pick = rng.uniform(0.0, total);
  const Slab* chosen = &slabs.back();
  for (const Slab& s : slabs) {
    if (pick < s.vol) {
      chosen = &s;
      break;
    }
    pick -= s.vol;
  }
  Point p(d);
  for (int a = 0; a < d; ++a) {
    if (a < chosen->axis)
      p[a] = rng.uniform(std::max(out.lo(a), in.lo(a)), std::min(out.hi(a), in.hi(a)));
    else if (a == chosen->axis)
      p[a] = rng.uniform(chosen->lo, chosen->hi);
    else
      p[a] = rng.uniform(out.lo(a), out.hi(a));
  }
  return p;
}

}  // namespace civd::test
