#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace civd {

// Fair split tree over the input points; backs the well-separated pair
// decomposition. Node point sets are contiguous ranges of `order`.
class SplitTree {
 public:
  struct Node {
    int left = -1, right = -1;
    int begin = 0, end = 0;  // range into order
    Point bb_lo, bb_hi;      // tight bounding rectangle
    int rep = -1;            // lexicographically smallest point of the range
  };

  explicit SplitTree(const PointSet& pts);

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  std::span<const int> points_of(int v) const {
    return {order_.data() + nodes_[v].begin, static_cast<std::size_t>(nodes_[v].end - nodes_[v].begin)};
  }
  double half_diagonal(int v) const;
  Point bb_center(int v) const;

 private:
  int build(const PointSet& pts, int begin, int end);
  std::vector<Node> nodes_;
  std::vector<int> order_;
  int root_ = -1;
};

struct WspdPair {
  int a = -1, b = -1;      // split-tree node handles
  int rep_a = -1, rep_b = -1;  // representative point ids
};

struct Wspd {
  SplitTree tree;
  std::vector<WspdPair> pairs;
};

// 12-well-separated pair decomposition; every unordered point pair is covered
// by exactly one output pair. Rejects duplicate input points.
Wspd build_wspd(const PointSet& pts);

struct SpannerEdge {
  int p = -1, q = -1;
  double w = 0.0;
};

// One edge per pair, connecting the representatives; a stretch-2 spanner.
std::vector<SpannerEdge> build_spanner(const PointSet& pts, const Wspd& wspd);

struct DistanceTreeNode {
  double s = 0.0;       // diameter upper bound of the node's point set
  double merge_w = 0.0;  // weight of the edge that created this node
  int rep = -1;         // representative input point id, l(v)
  int child[2] = {-1, -1};
  int parent = -1;
  int begin = 0, end = 0;  // leaf range into leaf_order
};

// Bottom-up merge tree over the spanner edges. Leaves are input points
// (node id == point id); each node carries s(v), l(v) and the guard boxes
// E(v), E'(v) of edge 8 s(v)/beta and 4 s(v)/beta.
class DistanceTree {
 public:
  DistanceTree() = default;

  const DistanceTreeNode& node(int v) const { return nodes_[v]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  int leaf_count() const { return n_; }
  double beta() const { return beta_; }
  bool is_leaf(int v) const { return nodes_[v].child[0] < 0; }
  std::int64_t size(int v) const { return nodes_[v].end - nodes_[v].begin; }
  std::span<const int> leaf_points(int v) const {
    return {leaf_order_.data() + nodes_[v].begin,
            static_cast<std::size_t>(nodes_[v].end - nodes_[v].begin)};
  }

  AxisBox guard_box(int v, const PointSet& pts) const {  // E(v)
    return AxisBox{pts[nodes_[v].rep], 8.0 * nodes_[v].s / beta_};
  }
  AxisBox guard_box_inner(int v, const PointSet& pts) const {  // E'(v)
    return AxisBox{pts[nodes_[v].rep], 4.0 * nodes_[v].s / beta_};
  }

  friend DistanceTree build_distance_tree(const PointSet& pts, double beta);
  friend class ArtifactCodec;

 private:
  std::vector<DistanceTreeNode> nodes_;
  std::vector<int> leaf_order_;
  int root_ = -1;
  int n_ = 0;
  double beta_ = 0.0;
};

DistanceTree build_distance_tree(const PointSet& pts, double beta);

// Exact distance from q to the nearest input point, optionally ignoring the
// leaf range [skip_begin, skip_end) of the tree ordering. The tree is used
// only to prune: every point of P_v lies within s(v) of l(v).
double nearest_point_distance(const DistanceTree& tree, const PointSet& pts, const Point& q,
                              int skip_begin = 0, int skip_end = 0);
double nearest_box_distance(const DistanceTree& tree, const PointSet& pts, const AxisBox& box,
                            double upper_hint = -1.0);

}  // namespace civd
