#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "errors.hpp"

namespace civd {

// Absolute tolerance for membership tests near box boundaries.
inline constexpr double kTol = 1e-9;
inline constexpr int kMaxDim = 8;

// A point in R^d, d <= kMaxDim. Fixed inline storage keeps the hot loops
// allocation-free; the ambient dimension is constant within a run.
class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(static_cast<std::int8_t>(dim)) { c_.fill(0.0); }
  Point(std::initializer_list<double> xs) {
    dim_ = static_cast<std::int8_t>(xs.size());
    int i = 0;
    for (double x : xs) c_[i++] = x;
  }
  static Point from(std::span<const double> xs) {
    Point p(static_cast<int>(xs.size()));
    for (int i = 0; i < p.dim_; ++i) p.c_[i] = xs[i];
    return p;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const double* data() const { return c_.data(); }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  std::int8_t dim_ = 0;
};

inline double dist_sq(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}
inline double dist(const Point& a, const Point& b) { return std::sqrt(dist_sq(a, b)); }
inline double norm(const Point& a) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * a[i];
  return std::sqrt(s);
}
inline Point sub(const Point& a, const Point& b) {
  Point r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline Point add(const Point& a, const Point& b) {
  Point r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline Point scale(const Point& a, double s) {
  Point r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] * s;
  return r;
}

// Axis-aligned hypercube given by center and edge length.
struct AxisBox {
  Point center;
  double edge = 0.0;

  int dim() const { return center.dim(); }
  double lo(int i) const { return center[i] - edge * 0.5; }
  double hi(int i) const { return center[i] + edge * 0.5; }
  double diameter() const { return edge * std::sqrt(static_cast<double>(dim())); }

  // Closed membership with absolute tolerance.
  bool contains(const Point& p, double tol = kTol) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo(i) - tol || p[i] > hi(i) + tol) return false;
    return true;
  }
  // Half-open membership: closed on the low side of each axis, open on the
  // high side. Used for point location so each point lands in exactly one
  // region; no tolerance on purpose.
  bool contains_half_open(const Point& p) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo(i) || p[i] >= hi(i)) return false;
    return true;
  }
};

// An axis-aligned rectangle (per-axis intervals); intersections of hypercubes
// are rectangles, not hypercubes.
struct Rect {
  Point lo, hi;
  bool empty = true;

  int dim() const { return lo.dim(); }
  double extent(int i) const { return hi[i] - lo[i]; }
  double max_extent() const {
    double m = 0;
    for (int i = 0; i < dim(); ++i) m = std::max(m, extent(i));
    return m;
  }
  Point center() const {
    Point c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }
};

struct Segment {
  Point a, b;
};

enum class EdgeRelation { Disjoint, Cuts, PassesThrough, Contained };

// A cell region: either a box or the difference of two boxes (inner strictly
// inside outer, nonempty difference).
struct Region {
  AxisBox outer;
  std::optional<AxisBox> inner;

  bool is_difference() const { return inner.has_value(); }
  bool contains_half_open(const Point& p) const {
    if (!outer.contains_half_open(p)) return false;
    if (inner && inner->contains_half_open(p)) return false;
    return true;
  }
};

double dist_point_box(const Point& p, const AxisBox& b);
double dist_sq_point_box(const Point& p, const AxisBox& b);

bool boxes_intersect(const AxisBox& a, const AxisBox& b, double tol = kTol);
Rect box_intersection(const AxisBox& a, const AxisBox& b);

// The 2^d half-edge children of b, indexed by orthant: bit i set means the
// high half along axis i.
std::vector<AxisBox> split_box(const AxisBox& b);
AxisBox child_box(const AxisBox& b, int orthant);
int orthant_of(const AxisBox& b, const Point& p);  // half-open: >= center goes high

AxisBox smallest_enclosing_box(std::span<const Point> points);

// Smallest hypercube containing `inner`, translated minimally so it lies
// inside `outer`. Falls back to `outer` when the required edge matches.
AxisBox smallest_hypercube_within(const AxisBox& outer, const Rect& inner);

EdgeRelation box_edge_relation(const Segment& e, const AxisBox& b, double tol = kTol);

std::vector<Point> box_corners(const AxisBox& b);
std::vector<Segment> box_edges(const AxisBox& b);

// Interior representative of a region: box center, or for a box difference
// the center of the thickest axis slab of outer minus inner.
Point region_anchor(const Region& r);

// dim-checked flat storage of n points.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::vector<double> coords, int dim);

  int size() const { return n_; }
  int dim() const { return dim_; }
  Point operator[](int i) const {
    return Point::from(std::span<const double>(xs_.data() + static_cast<std::size_t>(i) * dim_, dim_));
  }
  std::span<const double> row(int i) const {
    return {xs_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const { return xs_; }

  AxisBox bounding_box() const;
  // Returns indices (i, j) of a duplicate pair if present.
  std::optional<std::pair<int, int>> find_duplicate() const;

 private:
  std::vector<double> xs_;
  int n_ = 0;
  int dim_ = 0;
};

}  // namespace civd
