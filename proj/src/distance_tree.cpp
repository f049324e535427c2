#include "distance_tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace civd {

namespace {
constexpr double kSeparation = 12.0;

bool lex_less(const PointSet& pts, int a, int b) {
  auto ra = pts.row(a), rb = pts.row(b);
  return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
}
}  // namespace

SplitTree::SplitTree(const PointSet& pts) {
  order_.resize(pts.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * pts.size());
  root_ = build(pts, 0, pts.size());
}

int SplitTree::build(const PointSet& pts, int begin, int end) {
  Node nd;
  nd.begin = begin;
  nd.end = end;
  int d = pts.dim();
  nd.bb_lo = pts[order_[begin]];
  nd.bb_hi = nd.bb_lo;
  nd.rep = order_[begin];
  for (int k = begin + 1; k < end; ++k) {
    Point p = pts[order_[k]];
    for (int i = 0; i < d; ++i) {
      nd.bb_lo[i] = std::min(nd.bb_lo[i], p[i]);
      nd.bb_hi[i] = std::max(nd.bb_hi[i], p[i]);
    }
    if (lex_less(pts, order_[k], nd.rep)) nd.rep = order_[k];
  }
  if (end - begin > 1) {
    int axis = 0;
    double ext = -1;
    for (int i = 0; i < d; ++i) {
      double e = nd.bb_hi[i] - nd.bb_lo[i];
      if (e > ext) {
        ext = e;
        axis = i;
      }
    }
    if (ext <= 0.0) fail(Errc::duplicate_points, "duplicate input points");
    double mid = 0.5 * (nd.bb_lo[axis] + nd.bb_hi[axis]);
    auto it = std::partition(order_.begin() + begin, order_.begin() + end,
                             [&](int id) { return pts.row(id)[axis] < mid; });
    int cut = static_cast<int>(it - order_.begin());
    if (cut == begin || cut == end) {
      // Floating-point collapse of the midpoint; fall back to splitting off
      // the points that sit at the low extreme.
      double lo = nd.bb_lo[axis];
      it = std::partition(order_.begin() + begin, order_.begin() + end,
                          [&](int id) { return pts.row(id)[axis] <= lo; });
      cut = static_cast<int>(it - order_.begin());
    }
    nd.left = build(pts, begin, cut);
    nd.right = build(pts, cut, end);
  }
  nodes_.push_back(nd);
  return static_cast<int>(nodes_.size()) - 1;
}

double SplitTree::half_diagonal(int v) const {
  const Node& nd = nodes_[v];
  double s = 0;
  for (int i = 0; i < nd.bb_lo.dim(); ++i) {
    double e = nd.bb_hi[i] - nd.bb_lo[i];
    s += e * e;
  }
  return 0.5 * std::sqrt(s);
}

Point SplitTree::bb_center(int v) const {
  const Node& nd = nodes_[v];
  Point c(nd.bb_lo.dim());
  for (int i = 0; i < c.dim(); ++i) c[i] = 0.5 * (nd.bb_lo[i] + nd.bb_hi[i]);
  return c;
}

namespace {
void find_pairs(const SplitTree& t, int a, int b, std::vector<WspdPair>& out) {
  double ra = t.half_diagonal(a), rb = t.half_diagonal(b);
  double r = std::max(ra, rb);
  double cd = dist(t.bb_center(a), t.bb_center(b));
  if (cd - 2.0 * r >= kSeparation * r) {
    out.push_back({a, b, t.nodes()[a].rep, t.nodes()[b].rep});
    return;
  }
  if (ra < rb) std::swap(a, b);  // split the node with the larger extent
  find_pairs(t, t.nodes()[a].left, b, out);
  find_pairs(t, t.nodes()[a].right, b, out);
}

void collect_pairs(const SplitTree& t, int v, std::vector<WspdPair>& out) {
  const auto& nd = t.nodes()[v];
  if (nd.left < 0) return;
  collect_pairs(t, nd.left, out);
  collect_pairs(t, nd.right, out);
  find_pairs(t, nd.left, nd.right, out);
}
}  // namespace

Wspd build_wspd(const PointSet& pts) {
  if (pts.size() < 1) fail(Errc::empty_input, "need at least one point");
  if (auto dup = pts.find_duplicate())
    fail(Errc::duplicate_points,
         "duplicate input points at indices " + std::to_string(dup->first) + " and " +
             std::to_string(dup->second));
  Wspd w{SplitTree(pts), {}};
  collect_pairs(w.tree, w.tree.root(), w.pairs);
  return w;
}

std::vector<SpannerEdge> build_spanner(const PointSet& pts, const Wspd& wspd) {
  std::vector<SpannerEdge> edges;
  edges.reserve(wspd.pairs.size());
  for (const WspdPair& p : wspd.pairs)
    edges.push_back({p.rep_a, p.rep_b, dist(pts[p.rep_a], pts[p.rep_b])});
  return edges;
}

namespace {
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};
}  // namespace

DistanceTree build_distance_tree(const PointSet& pts, double beta) {
  if (!(beta > 0.0 && beta < 0.5)) fail(Errc::invalid_argument, "beta must be in (0, 1/2)");
  Wspd wspd = build_wspd(pts);
  std::vector<SpannerEdge> edges = build_spanner(pts, wspd);

  int n = pts.size();
  DistanceTree tree;
  tree.beta_ = beta;
  tree.n_ = n;
  tree.nodes_.resize(n);
  for (int i = 0; i < n; ++i) {
    tree.nodes_[i].rep = i;
  }

  // Equal weights break ties by insertion order for reproducibility.
  std::vector<int> eidx(edges.size());
  std::iota(eidx.begin(), eidx.end(), 0);
  std::sort(eidx.begin(), eidx.end(), [&](int a, int b) {
    if (edges[a].w != edges[b].w) return edges[a].w < edges[b].w;
    return a < b;
  });

  Dsu dsu(n);
  std::vector<int> comp_root(n);
  std::iota(comp_root.begin(), comp_root.end(), 0);
  std::vector<std::int64_t> comp_size(n, 1);

  tree.nodes_.reserve(2 * n);
  for (int ei : eidx) {
    const SpannerEdge& e = edges[ei];
    int ra = dsu.find(e.p), rb = dsu.find(e.q);
    if (ra == rb) continue;  // endpoints already share a tree
    int v1 = comp_root[ra], v2 = comp_root[rb];
    DistanceTreeNode nd;
    nd.s = tree.nodes_[v1].s + tree.nodes_[v2].s + e.w;
    nd.merge_w = e.w;
    nd.child[0] = v1;
    nd.child[1] = v2;
    std::int64_t c1 = comp_size[ra], c2 = comp_size[rb];
    nd.rep = c2 > c1 ? tree.nodes_[v2].rep : tree.nodes_[v1].rep;
    int id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back(nd);
    tree.nodes_[v1].parent = id;
    tree.nodes_[v2].parent = id;
    dsu.parent[ra] = rb;
    comp_root[rb] = id;
    comp_size[rb] = c1 + c2;
  }
  tree.root_ = comp_root[dsu.find(0)];

  // Leaf ranges via iterative DFS.
  tree.leaf_order_.reserve(n);
  std::vector<std::pair<int, int>> stack;  // (node, state)
  stack.emplace_back(tree.root_, 0);
  while (!stack.empty()) {
    auto& [v, state] = stack.back();
    DistanceTreeNode& nd = tree.nodes_[v];
    if (nd.child[0] < 0) {
      nd.begin = static_cast<int>(tree.leaf_order_.size());
      tree.leaf_order_.push_back(v);
      nd.end = nd.begin + 1;
      stack.pop_back();
      continue;
    }
    if (state == 0) {
      nd.begin = static_cast<int>(tree.leaf_order_.size());
      state = 1;
      stack.emplace_back(nd.child[0], 0);
    } else if (state == 1) {
      state = 2;
      stack.emplace_back(nd.child[1], 0);
    } else {
      nd.end = static_cast<int>(tree.leaf_order_.size());
      stack.pop_back();
    }
  }
  return tree;
}

namespace {
template <class DistLowerBound, class LeafDist>
double nearest_search(const DistanceTree& tree, int v, double best, int skip_begin, int skip_end,
                      const DistLowerBound& bound, const LeafDist& leaf_dist) {
  const DistanceTreeNode& nd = tree.node(v);
  if (nd.begin >= skip_begin && nd.end <= skip_end) return best;
  if (tree.is_leaf(v)) {
    return std::min(best, leaf_dist(nd.rep));
  }
  double b0 = bound(nd.child[0]);
  double b1 = bound(nd.child[1]);
  int first = nd.child[0], second = nd.child[1];
  if (b1 < b0) {
    std::swap(first, second);
    std::swap(b0, b1);
  }
  if (b0 < best) best = nearest_search(tree, first, best, skip_begin, skip_end, bound, leaf_dist);
  if (b1 < best) best = nearest_search(tree, second, best, skip_begin, skip_end, bound, leaf_dist);
  return best;
}
}  // namespace

double nearest_point_distance(const DistanceTree& tree, const PointSet& pts, const Point& q,
                              int skip_begin, int skip_end) {
  auto bound = [&](int v) {
    const auto& nd = tree.node(v);
    return std::max(0.0, dist(q, pts[nd.rep]) - nd.s);
  };
  auto leaf = [&](int rep) { return dist(q, pts[rep]); };
  return nearest_search(tree, tree.root(), std::numeric_limits<double>::infinity(), skip_begin,
                        skip_end, bound, leaf);
}

double nearest_box_distance(const DistanceTree& tree, const PointSet& pts, const AxisBox& box,
                            double upper_hint) {
  auto bound = [&](int v) {
    const auto& nd = tree.node(v);
    return std::max(0.0, dist_point_box(pts[nd.rep], box) - nd.s);
  };
  auto leaf = [&](int rep) { return dist_point_box(pts[rep], box); };
  double start = upper_hint > 0 ? upper_hint : std::numeric_limits<double>::infinity();
  double best = nearest_search(tree, tree.root(), start, 0, 0, bound, leaf);
  if (upper_hint > 0 && best >= upper_hint)  // hint too tight; redo unbounded
    best = nearest_search(tree, tree.root(), std::numeric_limits<double>::infinity(), 0, 0, bound, leaf);
  return best;
}

}  // namespace civd
