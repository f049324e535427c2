#include "vector_assignment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace civd {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

inline double norm2d(double x, double y) { return std::sqrt(x * x + y * y); }

// r^{-(t+1)}; the exponent is integral for the common force laws
inline double inv_power(double r, double t) {
  double e = t + 1.0;
  int k = static_cast<int>(e);
  if (static_cast<double>(k) == e && k >= 0 && k <= 16) {
    double p = 1.0, x = r;
    int kk = k;
    while (kk > 0) {
      if (kk & 1) p *= x;
      x *= x;
      kk >>= 1;
    }
    return 1.0 / p;
  }
  return std::pow(r, -e);
}

bool rect_contains(const Rect& r, const Point& p) {
  for (int i = 0; i < r.dim(); ++i)
    if (p[i] < r.lo[i] || p[i] > r.hi[i]) return false;
  return true;
}

// Shared predicates of the cover search; both find variants must use exactly
// the same tests. Everything reads the tree's flat arrays directly: the
// per-cell assignment visits these predicates millions of times per build.
struct CoverCtx {
  const AggregationTree& t;
  Point q;
  AxisBox b;
  double coef;  // Delta^{-1}(eps) / (3d)
  FindStats* stats;
  std::vector<std::int32_t>* out;
  std::vector<Segment> bedges;
  int dim;

  void touch() const {
    if (stats) ++stats->touched;
  }
  bool intersects(int v) const {
    const double* c = t.center_ptr(v);
    double h = (t.edge(v) + b.edge) * 0.5;
    for (int i = 0; i < dim; ++i)
      if (std::abs(c[i] - b.center[i]) > h) return false;
    return true;
  }
  bool touches(int v) const {
    int p = t.parent(v);
    if (p < 0) return intersects(v);
    // R'(v): the labeled orthant of the parent's box
    const double* pc = t.center_ptr(p);
    double pe = t.edge(p);
    int label = t.child_label(v);
    double h = (pe * 0.5 + b.edge) * 0.5;
    for (int i = 0; i < dim; ++i) {
      double ci = pc[i] + ((label >> i & 1) ? pe * 0.25 : -pe * 0.25);
      if (std::abs(ci - b.center[i]) > h) return false;
    }
    return true;
  }
  bool small(int v) const {
    const double* c = t.center_ptr(v);
    double s = 0;
    for (int i = 0; i < dim; ++i) {
      double d = q[i] - c[i];
      s += d * d;
    }
    return t.edge(v) <= std::sqrt(s) * coef;
  }
  // Number of quad sub-boxes of R(v) meeting B, and the label of one of them.
  std::pair<int, int> orthant_hits(int v) const {
    const double* c = t.center_ptr(v);
    double e = t.edge(v);
    double h = (e * 0.5 + b.edge) * 0.5;
    // Per axis, which halves reach B: bit 0 = low, bit 1 = high.
    int cnt = 1, first = 0;
    for (int i = 0; i < dim; ++i) {
      double lo_c = c[i] - e * 0.25, hi_c = c[i] + e * 0.25;
      bool lo_ok = std::abs(lo_c - b.center[i]) <= h;
      bool hi_ok = std::abs(hi_c - b.center[i]) <= h;
      if (!lo_ok && !hi_ok) return {0, -1};
      if (lo_ok && hi_ok) {
        cnt *= 2;
        if (cnt > 2) cnt = 2;  // only 0/1/many matters
      } else if (hi_ok) {
        first |= 1 << i;
      }
    }
    return {cnt, first};
  }
  bool stop_node(int w) const {
    touch();
    if (!intersects(w)) return true;
    if (small(w)) return true;
    auto [cnt, o] = orthant_hits(w);
    if (cnt >= 2) return true;
    return t.child_by_label(w, o) < 0;
  }
  void compute_edges() { bedges = box_edges(b); }
  void edges_inside(int v, std::vector<int>& yset) const {
    yset.clear();
    Rect r = t.tight_rect(v);
    for (std::size_t k = 0; k < bedges.size(); ++k)
      if (rect_contains(r, bedges[k].a) && rect_contains(r, bedges[k].b))
        yset.push_back(static_cast<int>(k));
  }
};

void slow_walk(const CoverCtx& ctx, int v);

void slow_children(const CoverCtx& ctx, int v) {
  for (std::int32_t c : ctx.t.children(v))
    if (ctx.touches(c)) slow_walk(ctx, c);
}

void slow_walk(const CoverCtx& ctx, int v) {
  ctx.touch();
  if (!ctx.intersects(v)) return;
  if (ctx.small(v)) {
    ctx.out->push_back(v);
    return;
  }
  auto [cnt, o] = ctx.orthant_hits(v);
  if (cnt >= 2) {
    slow_children(ctx, v);
    return;
  }
  int cur = ctx.t.child_by_label(v, o);
  if (cur < 0) return;
  // The long-path loop: descend through non-splittable nodes with a single
  // box-touching child until one of the termination conditions fires.
  for (;;) {
    ctx.touch();
    if (!ctx.intersects(cur)) return;
    if (ctx.small(cur)) {
      ctx.out->push_back(cur);
      return;
    }
    auto [c2, o2] = ctx.orthant_hits(cur);
    if (c2 >= 2) {
      slow_children(ctx, cur);
      return;
    }
    int nxt = ctx.t.child_by_label(cur, o2);
    if (nxt < 0) return;
    cur = nxt;
  }
}

void fast_walk(CoverCtx& ctx, int v) {
  std::vector<int> yset;
  for (;;) {
    ctx.touch();
    if (!ctx.intersects(v)) return;
    if (ctx.small(v)) {
      ctx.out->push_back(v);
      return;
    }
    auto [cnt, o] = ctx.orthant_hits(v);
    if (cnt >= 2) {
      for (std::int32_t c : ctx.t.children(v))
        if (ctx.touches(c)) fast_walk(ctx, c);
      return;
    }
    if (ctx.t.child_by_label(v, o) < 0) return;
    // v is a walk node; locate the last walk node v_l without iterating the
    // chain: resolve contained edges of B via FindTail, then binary search
    // the orthant path determined by the remaining corner.
    int cur = v;
    int vl = -1;
    for (;;) {
      ctx.edges_inside(cur, yset);
      if (yset.empty()) {
        auto [c2, o2] = ctx.orthant_hits(cur);
        (void)c2;
        auto pr = ctx.t.ipath(cur, o2);
        int lo = pr.pos + 1, hi = pr.tail;
        if (lo > hi) {
          vl = pr.seq[pr.tail];
          break;
        }
        while (lo < hi) {
          int mid = lo + (hi - lo) / 2;
          if (ctx.stop_node(pr.seq[mid]))
            hi = mid;
          else
            lo = mid + 1;
        }
        vl = pr.seq[lo];
        break;
      }
      auto pred = [&](int u) {
        Rect r = ctx.t.tight_rect(u);
        for (int k : yset)
          if (!rect_contains(r, ctx.bedges[k].a) || !rect_contains(r, ctx.bedges[k].b))
            return false;
        return true;
      };
      std::int64_t probes = 0;
      int x = find_tail(ctx.t, cur, pred, &probes);
      if (ctx.stats) ctx.stats->touched += probes;
      if (x != cur && ctx.stop_node(x)) {
        vl = x;
        break;
      }
      auto [cx, ox] = ctx.orthant_hits(x);
      (void)cx;
      int nxt = ctx.t.child_by_label(x, ox);
      if (nxt < 0) {
        vl = x;
        break;
      }
      if (ctx.stop_node(nxt)) {
        vl = nxt;
        break;
      }
      cur = nxt;
    }
    v = vl;
  }
}

}  // namespace

AxisBox query_box(const Point& q_c, const InfluenceModel& model, int n, double r_prime_min) {
  double di = model.delta_inv_epsilon();
  double t = model.kind() == ModelKind::vector ? model.exponent()
                                               : static_cast<double>(model.dim());
  double edge = 4.0 * (1.0 + di) * std::pow(di, -1.0 / t) *
                std::pow(static_cast<double>(n), 1.0 / t) * r_prime_min;
  return AxisBox{q_c, edge};
}

std::vector<std::int32_t> slow_find(const AggregationTree& t, const Point& q_c, const AxisBox& b,
                                    double delta_inv, FindStats* stats) {
  std::vector<std::int32_t> out;
  CoverCtx ctx{t, q_c, b, delta_inv / (3.0 * t.dim()), stats, &out, {}, t.dim()};
  slow_walk(ctx, t.root());
  return out;
}

std::vector<std::int32_t> find_cover(const AggregationTree& t, const Point& q_c, const AxisBox& b,
                                     double delta_inv, FindStats* stats) {
  std::vector<std::int32_t> out;
  CoverCtx ctx{t, q_c, b, delta_inv / (3.0 * t.dim()), stats, &out, {}, t.dim()};
  ctx.compute_edges();
  fast_walk(ctx, t.root());
  return out;
}

namespace {

// Gaussian elimination for a vector orthogonal to d-1 row vectors.
std::optional<Point> nullspace_normal(std::span<const Point> rows, int d) {
  std::vector<std::vector<double>> m;
  for (const Point& r : rows) {
    std::vector<double> row(d);
    for (int i = 0; i < d; ++i) row[i] = r[i];
    m.push_back(std::move(row));
  }
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < d && rank < static_cast<int>(m.size()); ++col) {
    int piv = -1;
    double best = 1e-12;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (std::abs(m[r][col]) > best) {
        best = std::abs(m[r][col]);
        piv = r;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank) continue;
      double f = m[r][col] / m[rank][col];
      for (int c = col; c < d; ++c) m[r][c] -= f * m[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < static_cast<int>(m.size())) return std::nullopt;  // dependent rows
  // Free column -> unit solve.
  std::vector<bool> is_pivot(d, false);
  for (int c : pivot_col) is_pivot[c] = true;
  int free_col = -1;
  for (int c = 0; c < d; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  if (free_col < 0) return std::nullopt;
  Point n(d);
  n[free_col] = 1.0;
  for (int r = rank - 1; r >= 0; --r) {
    int pc = pivot_col[r];
    double s = m[r][free_col];
    n[pc] = -s / m[r][pc];
  }
  double len = norm(n);
  if (len < 1e-300) return std::nullopt;
  return scale(n, 1.0 / len);
}

void push_subset(std::set<std::vector<std::int32_t>>& fam, std::vector<std::int32_t> s) {
  std::sort(s.begin(), s.end());
  fam.insert(std::move(s));
}

void sides_for_normal(std::set<std::vector<std::int32_t>>& fam, std::span<const Point> w,
                      const Point& n) {
  std::vector<std::int32_t> strict, closed;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    double dp = 0;
    for (int k = 0; k < n.dim(); ++k) dp += w[i][k] * n[k];
    if (dp > kTol) {
      strict.push_back(i);
      closed.push_back(i);
    } else if (dp >= -kTol) {
      closed.push_back(i);
    }
  }
  push_subset(fam, strict);
  push_subset(fam, closed);
}

}  // namespace

std::vector<std::vector<std::int32_t>> enumerate_hyperplane_partitions(std::span<const Point> reps,
                                                                       const Point& q_c) {
  int d = q_c.dim();
  int m = static_cast<int>(reps.size());
  std::vector<Point> w;
  w.reserve(m);
  for (const Point& r : reps) {
    Point v = sub(r, q_c);
    if (norm(v) < kTol) fail(Errc::singular_query, "representative coincides with the query point");
    w.push_back(v);
  }
  std::set<std::vector<std::int32_t>> fam;
  fam.insert({});
  if (d == 1) {
    std::vector<std::int32_t> pos, neg;
    for (int i = 0; i < m; ++i) (w[i][0] > 0 ? pos : neg).push_back(i);
    push_subset(fam, pos);
    push_subset(fam, neg);
  } else if (d == 2) {
    std::vector<double> events;
    for (const Point& v : w) {
      double phi = std::atan2(v[1], v[0]);
      for (double a : {phi - M_PI / 2, phi + M_PI / 2}) {
        a = std::fmod(a, kTwoPi);
        if (a < 0) a += kTwoPi;
        events.push_back(a);
      }
    }
    std::sort(events.begin(), events.end());
    std::vector<double> thetas = events;
    for (std::size_t k = 0; k < events.size(); ++k) {
      double next = k + 1 < events.size() ? events[k + 1] : events[0] + kTwoPi;
      thetas.push_back(0.5 * (events[k] + next));
    }
    for (double th : thetas) sides_for_normal(fam, w, Point{std::cos(th), std::sin(th)});
  } else {
    // Normals orthogonal to (d-1)-subsets of the directions; the standard
    // basis pads the pool so smaller configurations are reachable too.
    std::vector<Point> pool = w;
    for (int i = 0; i < d; ++i) {
      Point e(d);
      e[i] = 1.0;
      pool.push_back(e);
    }
    int pn = static_cast<int>(pool.size());
    std::vector<int> idx(d - 1);
    std::vector<Point> rows(d - 1, Point(d));
    auto rec = [&](auto&& self, int start, int k) -> void {
      if (k == d - 1) {
        auto n = nullspace_normal(rows, d);
        if (!n) return;  // degenerate span; covered by other subsets
        sides_for_normal(fam, w, *n);
        Point neg = scale(*n, -1.0);
        sides_for_normal(fam, w, neg);
        return;
      }
      for (int i = start; i < pn; ++i) {
        rows[k] = pool[i];
        self(self, i + 1, k + 1);
      }
    };
    rec(rec, 0, 0);
  }
  return {fam.begin(), fam.end()};
}

namespace {
struct SweepScratch {
  std::vector<double> bx, by;
  struct Ev {
    double ang;
    std::int32_t i;
    std::int8_t enter;
  };
  std::vector<Ev> ev;
  std::vector<char> active;
  std::vector<std::int32_t> exits, enters;
};
thread_local SweepScratch g_sweep;
}  // namespace

// Core sweep over flat coordinates; scratch is reused across calls.
static std::pair<std::vector<std::int32_t>, double> sweep_halfplane(const double* wx,
                                                                    const double* wy,
                                                                    const double* weights, int m,
                                                                    double t) {
  SweepScratch& sc = g_sweep;
  auto& bx = sc.bx;
  auto& by = sc.by;
  bx.resize(m);
  by.resize(m);
  for (int i = 0; i < m; ++i) {
    double r = norm2d(wx[i], wy[i]);
    if (r < kTol) fail(Errc::singular_query, "zero direction in half-plane sweep");
    double s = weights[i] * inv_power(r, t);
    bx[i] = wx[i] * s;
    by[i] = wy[i] * s;
  }
  using Ev = SweepScratch::Ev;
  auto& ev = sc.ev;
  ev.clear();
  ev.reserve(2 * m);
  for (int i = 0; i < m; ++i) {
    double phi = std::atan2(wy[i], wx[i]);
    double en = std::fmod(phi - M_PI / 2 + kTwoPi, kTwoPi);
    double ex = std::fmod(phi + M_PI / 2 + kTwoPi, kTwoPi);
    ev.push_back({en, i, 1});
    ev.push_back({ex, i, 0});
  }
  std::sort(ev.begin(), ev.end(), [](const Ev& a, const Ev& b) {
    if (a.ang != b.ang) return a.ang < b.ang;
    if (a.enter != b.enter) return a.enter > b.enter;
    return a.i < b.i;
  });

  // Membership at the wrap interval between the last and first event.
  double th0 = 0.5 * (ev.back().ang + ev.front().ang + kTwoPi);
  if (th0 >= kTwoPi) th0 -= kTwoPi;
  double nx = std::cos(th0), ny = std::sin(th0);
  auto& active = sc.active;
  active.assign(m, 0);
  double sx = 0, sy = 0;
  int active_count = 0;
  for (int i = 0; i < m; ++i) {
    if (wx[i] * nx + wy[i] * ny > 0) {
      active[i] = 1;
      ++active_count;
      sx += bx[i];
      sy += by[i];
    }
  }

  std::vector<std::int32_t> best_set;
  double best_val = -1.0;
  std::size_t best_size = 0;
  // Only improvements materialize the member set.
  auto consider = [&](double vx, double vy, std::size_t size,
                      std::span<const std::int32_t> minus, std::span<const std::int32_t> plus) {
    double val = norm2d(vx, vy);
    if (val > best_val + 1e-15 * (1.0 + best_val) ||
        (std::abs(val - best_val) <= 1e-15 * (1.0 + best_val) && size > best_size)) {
      best_val = val;
      best_size = size;
      best_set.clear();
      for (int i = 0; i < m; ++i) {
        bool in = active[i];
        for (std::int32_t j : minus)
          if (j == i) in = false;
        for (std::int32_t j : plus)
          if (j == i) in = true;
        if (in) best_set.push_back(i);
      }
    }
  };

  consider(sx, sy, active_count, {}, {});
  auto& exits = sc.exits;
  auto& enters = sc.enters;
  for (std::size_t k = 0; k < ev.size();) {
    std::size_t g = k;
    exits.clear();
    enters.clear();
    while (g < ev.size() && ev[g].ang == ev[k].ang) {
      (ev[g].enter ? enters : exits).push_back(ev[g].i);
      ++g;
    }
    double strict_x = sx, strict_y = sy;
    int strict_count = active_count;
    for (std::int32_t i : exits)
      if (active[i]) {
        strict_x -= bx[i];
        strict_y -= by[i];
        --strict_count;
      }
    // Strict side at the event angle: boundary sites excluded.
    consider(strict_x, strict_y, strict_count, exits, {});
    // Boundary-included variant: every site on the line joins.
    double cx = strict_x, cy = strict_y;
    int ccount = strict_count;
    for (std::int32_t i : exits) {
      cx += bx[i];
      cy += by[i];
      ++ccount;
    }
    for (std::int32_t i : enters)
      if (!active[i]) {
        cx += bx[i];
        cy += by[i];
        ++ccount;
      }
    consider(cx, cy, ccount, {}, enters);
    // Advance past the event.
    for (std::int32_t i : exits)
      if (active[i]) {
        active[i] = 0;
        --active_count;
        sx -= bx[i];
        sy -= by[i];
      }
    for (std::int32_t i : enters)
      if (!active[i]) {
        active[i] = 1;
        ++active_count;
        sx += bx[i];
        sy += by[i];
      }
    consider(sx, sy, active_count, {}, {});
    k = g;
  }

  // Recompute the winning value exactly.
  double fx = 0, fy = 0;
  for (std::int32_t i : best_set) {
    fx += bx[i];
    fy += by[i];
  }
  return {std::move(best_set), norm2d(fx, fy)};
}

std::pair<std::vector<std::int32_t>, double> best_halfplane_subset(std::span<const Point> dirs,
                                                                   std::span<const double> weights,
                                                                   double t) {
  int m = static_cast<int>(dirs.size());
  std::vector<double> wx(m), wy(m);
  for (int i = 0; i < m; ++i) {
    wx[i] = dirs[i][0];
    wy[i] = dirs[i][1];
  }
  return sweep_halfplane(wx.data(), wy.data(), weights.data(), m, t);
}

namespace {
int nearest_leaf(const AggregationTree& t, const Point& q) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, int v) -> void {
    if (t.is_leaf(v)) {
      double d = dist(q, t.rep(v));
      if (d < best_d) {
        best_d = d;
        best = v;
      }
      return;
    }
    std::vector<std::pair<double, int>> kids;
    for (std::int32_t c : t.children(v))
      kids.emplace_back(dist_point_box(q, t.shrunk_box(c)), c);
    std::sort(kids.begin(), kids.end());
    for (auto& [d, c] : kids)
      if (d < best_d) self(self, c);
  };
  rec(rec, t.root());
  return best;
}
}  // namespace

VectorAssignment assign_vector(const AggregationTree& t, const PointSet& pts,
                               const InfluenceModel& model, const Point& q_c, double r_prime_min,
                               FindStats* stats) {
  VectorAssignment out;
  AxisBox b = query_box(q_c, model, pts.size(), r_prime_min);
  std::vector<std::int32_t> cover = find_cover(t, q_c, b, model.delta_inv_epsilon(), stats);
  out.cover_size = static_cast<std::int64_t>(cover.size());
  if (cover.empty()) {
    // Possible only through floating-point shaving at the box boundary.
    out.empty_cover_fallback = true;
    int leaf = nearest_leaf(t, q_c);
    out.nodes = {leaf};
    WeightedSite s{t.rep(leaf), 1};
    out.influence = model.evaluate(std::span<const WeightedSite>(&s, 1), q_c).magnitude;
    return out;
  }
  int d = pts.dim();
  int m = static_cast<int>(cover.size());

  std::vector<std::int32_t> best;
  double best_val = -1;
  if (d == 2) {
    thread_local std::vector<double> wx, wy, wt;
    wx.resize(m);
    wy.resize(m);
    wt.resize(m);
    for (int i = 0; i < m; ++i) {
      const double* c = t.center_ptr(cover[i]);
      wx[i] = c[0] - q_c[0];
      wy[i] = c[1] - q_c[1];
      wt[i] = static_cast<double>(t.size(cover[i]));
    }
    auto [set, val] = sweep_halfplane(wx.data(), wy.data(), wt.data(), m, model.exponent());
    best = std::move(set);
    best_val = val;
  } else if (d == 1) {
    std::vector<Point> w(m);
    std::vector<double> mult(m);
    for (int i = 0; i < m; ++i) {
      w[i] = sub(t.rep(cover[i]), q_c);
      mult[i] = static_cast<double>(t.size(cover[i]));
    }
    for (int side = 0; side < 2; ++side) {
      std::vector<std::int32_t> s;
      double sum = 0;
      for (int i = 0; i < m; ++i) {
        if ((w[i][0] > 0) == (side == 0)) {
          s.push_back(i);
          sum += mult[i] * std::pow(std::abs(w[i][0]), -model.exponent());
        }
      }
      if (sum > best_val || (sum == best_val && s.size() > best.size())) {
        best_val = sum;
        best = std::move(s);
      }
    }
  } else {
    std::vector<Point> reps(m);
    for (int i = 0; i < m; ++i) reps[i] = t.rep(cover[i]);
    auto subsets = enumerate_hyperplane_partitions(reps, q_c);
    std::vector<WeightedSite> sites;
    for (const auto& s : subsets) {
      if (s.empty()) continue;
      sites.clear();
      for (std::int32_t i : s) sites.push_back({reps[i], t.size(cover[i])});
      double val = model.evaluate(sites, q_c).magnitude;
      if (val > best_val || (val == best_val && s.size() > best.size())) {
        best_val = val;
        best = s;
      }
    }
  }
  if (best.empty()) {
    // All candidate sums vanished (exact cancellation); any single node beats
    // the empty set.
    best = {0};
    WeightedSite s{t.rep(cover[0]), t.size(cover[0])};
    best_val = model.evaluate(std::span<const WeightedSite>(&s, 1), q_c).magnitude;
  }
  out.nodes.reserve(best.size());
  for (std::int32_t i : best) out.nodes.push_back(cover[i]);
  out.influence = best_val;
  return out;
}

}  // namespace civd
