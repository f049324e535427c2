#include "geometry.hpp"

#include <algorithm>
#include <numeric>

namespace civd {

double dist_sq_point_box(const Point& p, const AxisBox& b) {
  if (p.dim() != b.dim()) fail(Errc::dimension_mismatch, "point/box dimension mismatch");
  double s = 0;
  double h = b.edge * 0.5;
  for (int i = 0; i < p.dim(); ++i) {
    double d = std::abs(p[i] - b.center[i]) - h;
    if (d > 0) s += d * d;
  }
  return s;
}

double dist_point_box(const Point& p, const AxisBox& b) { return std::sqrt(dist_sq_point_box(p, b)); }

bool boxes_intersect(const AxisBox& a, const AxisBox& b, double tol) {
  double h = (a.edge + b.edge) * 0.5;
  for (int i = 0; i < a.dim(); ++i)
    if (std::abs(a.center[i] - b.center[i]) > h + tol) return false;
  return true;
}

Rect box_intersection(const AxisBox& a, const AxisBox& b) {
  Rect r;
  r.lo = Point(a.dim());
  r.hi = Point(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    r.lo[i] = std::max(a.lo(i), b.lo(i));
    r.hi[i] = std::min(a.hi(i), b.hi(i));
    if (r.lo[i] > r.hi[i]) return Rect{};
  }
  r.empty = false;
  return r;
}

AxisBox child_box(const AxisBox& b, int orthant) {
  AxisBox c;
  c.center = b.center;
  c.edge = b.edge * 0.5;
  double q = b.edge * 0.25;
  for (int i = 0; i < b.dim(); ++i) c.center[i] += (orthant >> i & 1) ? q : -q;
  return c;
}

std::vector<AxisBox> split_box(const AxisBox& b) {
  if (b.edge <= 0) fail(Errc::invalid_argument, "cannot split a zero-size box");
  std::vector<AxisBox> out;
  int k = 1 << b.dim();
  out.reserve(k);
  for (int o = 0; o < k; ++o) out.push_back(child_box(b, o));
  return out;
}

int orthant_of(const AxisBox& b, const Point& p) {
  int o = 0;
  for (int i = 0; i < b.dim(); ++i)
    if (p[i] >= b.center[i]) o |= 1 << i;
  return o;
}

AxisBox smallest_enclosing_box(std::span<const Point> points) {
  if (points.empty()) fail(Errc::empty_input, "smallest_enclosing_box on empty set");
  int d = points[0].dim();
  Point lo = points[0], hi = points[0];
  for (const Point& p : points) {
    if (p.dim() != d) fail(Errc::dimension_mismatch, "mixed dimensions");
    for (int i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  AxisBox b;
  b.center = Point(d);
  b.edge = 0;
  for (int i = 0; i < d; ++i) {
    b.center[i] = 0.5 * (lo[i] + hi[i]);
    b.edge = std::max(b.edge, hi[i] - lo[i]);
  }
  return b;
}

AxisBox smallest_hypercube_within(const AxisBox& outer, const Rect& inner) {
  if (inner.empty) fail(Errc::invalid_argument, "empty rectangle");
  int d = outer.dim();
  double e = std::min(inner.max_extent(), outer.edge);
  AxisBox b;
  b.edge = e;
  b.center = inner.center();
  // Translate per axis so the cube stays inside outer while still covering
  // the rectangle (possible because the rectangle lies inside outer and its
  // extents are <= e).
  for (int i = 0; i < d; ++i) {
    double lo = b.center[i] - e * 0.5;
    double hi = b.center[i] + e * 0.5;
    if (lo < outer.lo(i)) {
      b.center[i] += outer.lo(i) - lo;
    } else if (hi > outer.hi(i)) {
      b.center[i] -= hi - outer.hi(i);
    }
  }
  return b;
}

EdgeRelation box_edge_relation(const Segment& e, const AxisBox& b, double tol) {
  if (e.a.dim() != b.dim()) fail(Errc::dimension_mismatch, "segment/box dimension mismatch");
  bool a_in = b.contains(e.a, tol);
  bool b_in = b.contains(e.b, tol);
  if (a_in && b_in) return EdgeRelation::Contained;
  // Slab clipping of the parametric segment a + t(b-a), t in [0,1].
  double t0 = 0.0, t1 = 1.0;
  for (int i = 0; i < b.dim(); ++i) {
    double dirv = e.b[i] - e.a[i];
    double lo = b.lo(i) - tol, hi = b.hi(i) + tol;
    if (std::abs(dirv) < 1e-300) {
      if (e.a[i] < lo || e.a[i] > hi) return EdgeRelation::Disjoint;
      continue;
    }
    double ta = (lo - e.a[i]) / dirv;
    double tb = (hi - e.a[i]) / dirv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return EdgeRelation::Disjoint;
  }
  if (!a_in && !b_in) return EdgeRelation::PassesThrough;
  return EdgeRelation::Cuts;
}

std::vector<Point> box_corners(const AxisBox& b) {
  int d = b.dim();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << d);
  for (int m = 0; m < (1 << d); ++m) {
    Point p(d);
    for (int i = 0; i < d; ++i) p[i] = (m >> i & 1) ? b.hi(i) : b.lo(i);
    out.push_back(p);
  }
  return out;
}

std::vector<Segment> box_edges(const AxisBox& b) {
  int d = b.dim();
  std::vector<Segment> out;
  for (int axis = 0; axis < d; ++axis) {
    // The other d-1 coordinates are fixed at lo/hi; the edge spans `axis`.
    for (int m = 0; m < (1 << (d - 1)); ++m) {
      Point a(d), c(d);
      int bit = 0;
      for (int i = 0; i < d; ++i) {
        if (i == axis) continue;
        double v = (m >> bit & 1) ? b.hi(i) : b.lo(i);
        a[i] = v;
        c[i] = v;
        ++bit;
      }
      a[axis] = b.lo(axis);
      c[axis] = b.hi(axis);
      out.push_back({a, c});
    }
  }
  return out;
}

Point region_anchor(const Region& r) {
  if (!r.inner) return r.outer.center;
  const AxisBox& out = r.outer;
  const AxisBox& in = *r.inner;
  int d = out.dim();
  int best_axis = 0;
  bool best_low = true;
  double best_thick = -1;
  for (int i = 0; i < d; ++i) {
    double tl = in.lo(i) - out.lo(i);
    double th = out.hi(i) - in.hi(i);
    if (tl > best_thick) {
      best_thick = tl;
      best_axis = i;
      best_low = true;
    }
    if (th > best_thick) {
      best_thick = th;
      best_axis = i;
      best_low = false;
    }
  }
  Point p = out.center;
  p[best_axis] = best_low ? 0.5 * (out.lo(best_axis) + in.lo(best_axis))
                          : 0.5 * (in.hi(best_axis) + out.hi(best_axis));
  return p;
}

PointSet::PointSet(std::vector<double> coords, int dim) : xs_(std::move(coords)), dim_(dim) {
  if (dim < 1 || dim > kMaxDim) fail(Errc::unsupported_dimension, "dimension must be in [1, 8]");
  if (xs_.size() % dim != 0) fail(Errc::invalid_argument, "coordinate count not divisible by dim");
  n_ = static_cast<int>(xs_.size()) / dim;
  for (double x : xs_)
    if (!std::isfinite(x)) fail(Errc::invalid_argument, "non-finite coordinate");
}

AxisBox PointSet::bounding_box() const {
  if (n_ == 0) fail(Errc::empty_input, "bounding_box of empty point set");
  std::vector<Point> pts;
  pts.reserve(n_);
  for (int i = 0; i < n_; ++i) pts.push_back((*this)[i]);
  return smallest_enclosing_box(pts);
}

std::optional<std::pair<int, int>> PointSet::find_duplicate() const {
  std::vector<int> idx(n_);
  std::iota(idx.begin(), idx.end(), 0);
  auto lex_less = [&](int a, int b) {
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(idx.begin(), idx.end(), lex_less);
  for (int i = 0; i + 1 < n_; ++i) {
    auto ra = row(idx[i]), rb = row(idx[i + 1]);
    if (std::equal(ra.begin(), ra.end(), rb.begin())) return std::pair{idx[i], idx[i + 1]};
  }
  return std::nullopt;
}

}  // namespace civd
