#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace civd {

// Shrink-wrapped quad tree over the input points (every node box is the
// smallest enclosing hypercube of its points), with the auxiliary structures
// for long-path searches: per-orthant i-paths and the majority-path
// decomposition with weighted binary search trees.
class AggregationTree {
 public:
  explicit AggregationTree(const PointSet& pts);

  int dim() const { return dim_; }
  int fanout() const { return 1 << dim_; }
  int node_count() const { return static_cast<int>(edges_.size()); }
  int root() const { return 0; }

  bool is_leaf(int v) const { return child_count_[v] == 0; }
  int parent(int v) const { return parent_[v]; }
  int child_label(int v) const { return child_label_[v]; }
  std::span<const std::int32_t> children(int v) const {
    return {children_.data() + child_first_[v], static_cast<std::size_t>(child_count_[v])};
  }
  // Child with the given orthant label, or -1.
  int child_by_label(int v, int label) const {
    for (std::int32_t c : children(v))
      if (child_label_[c] == label) return c;
    return -1;
  }

  std::int64_t size(int v) const { return end_[v] - begin_[v]; }
  std::span<const std::int32_t> points_of(int v) const {
    return {order_.data() + begin_[v], static_cast<std::size_t>(end_[v] - begin_[v])};
  }
  int leaf_of_point(int point_id) const { return point_leaf_[point_id]; }

  double edge(int v) const { return edges_[v]; }  // S(v)
  const double* center_ptr(int v) const { return centers_.data() + static_cast<std::size_t>(v) * dim_; }
  const double* rect_lo_ptr(int v) const { return rect_lo_.data() + static_cast<std::size_t>(v) * dim_; }
  const double* rect_hi_ptr(int v) const { return rect_hi_.data() + static_cast<std::size_t>(v) * dim_; }
  AxisBox shrunk_box(int v) const {  // R(v)
    AxisBox b;
    b.edge = edges_[v];
    b.center = Point::from(
        std::span<const double>(centers_.data() + static_cast<std::size_t>(v) * dim_, dim_));
    return b;
  }
  AxisBox orthant_box(int v) const {  // R'(v): the unshrunk sub-box within the parent
    if (parent_[v] < 0) return shrunk_box(v);
    return child_box(shrunk_box(parent_[v]), child_label_[v]);
  }
  Point rep(int v) const { return shrunk_box(v).center; }  // L(v)

  // Tight bounding rectangle of the node's points. Unlike the padded
  // hypercubes these nest monotonically (child inside parent), which the
  // contained-edge chains of the long-path search need.
  Rect tight_rect(int v) const {
    Rect r;
    r.lo = Point::from(
        std::span<const double>(rect_lo_.data() + static_cast<std::size_t>(v) * dim_, dim_));
    r.hi = Point::from(
        std::span<const double>(rect_hi_.data() + static_cast<std::size_t>(v) * dim_, dim_));
    r.empty = false;
    return r;
  }

  // i-path access: the maximal chain through v following label-i child edges.
  struct PathRef {
    const std::int32_t* seq = nullptr;  // absolute array
    std::int32_t pos = 0;               // v's absolute index
    std::int32_t tail = 0;              // absolute index of the path's last node
  };
  PathRef ipath(int v, int label) const {
    PathRef r;
    r.seq = ipath_seq_[label].data();
    r.pos = ip_index_[static_cast<std::size_t>(v) * fanout() + label];
    r.tail = ip_tail_[static_cast<std::size_t>(v) * fanout() + label];
    return r;
  }

  // Majority-path access used by find_tail.
  int mp_seq(int pos) const { return mp_seq_[pos]; }
  int mp_bst_root(int v) const { return mp_root_[v]; }
  int mp_bst_left(int pos) const { return mp_left_[pos]; }
  int mp_bst_right(int pos) const { return mp_right_[pos]; }
  int mp_index(int v) const { return mp_index_[v]; }
  std::int64_t subtree_nodes(int v) const { return subtree_nodes_[v]; }

  friend class ArtifactCodec;

 private:
  AggregationTree() = default;
  void build(const PointSet& pts);
  void build_ipaths();
  void build_majority();

  int dim_ = 0;
  std::vector<double> centers_, edges_;
  std::vector<double> rect_lo_, rect_hi_;
  std::vector<std::int32_t> parent_, child_first_, begin_, end_;
  std::vector<std::uint8_t> child_count_, child_label_;
  std::vector<std::int32_t> children_;
  std::vector<std::int32_t> order_, point_leaf_;
  std::vector<std::int64_t> subtree_nodes_;

  std::vector<std::vector<std::int32_t>> ipath_seq_;
  std::vector<std::int32_t> ip_index_, ip_tail_;

  std::vector<std::int32_t> mp_seq_, mp_index_, mp_tail_, mp_root_, mp_left_, mp_right_;
};

// Finds the last node of a root-started, ancestor-closed chain Z given a
// constant-time membership predicate; `start` must lie on Z. Runs in
// O(log n) probes via the majority-path search trees.
template <class Pred>
int find_tail(const AggregationTree& t, int start, Pred&& pred, std::int64_t* probes = nullptr) {
  std::int64_t cnt = 0;
  int cur = start;
  for (;;) {
    int k = t.mp_bst_root(cur);
    int best = -1;
    while (k >= 0) {
      ++cnt;
      if (pred(t.mp_seq(k))) {
        best = k;
        k = t.mp_bst_right(k);
      } else {
        k = t.mp_bst_left(k);
      }
    }
    int w = t.mp_seq(best);  // last chain node on this majority path
    int wz = -1;
    for (std::int32_t c : t.children(w)) {
      ++cnt;
      if (pred(c)) {
        wz = c;
        break;
      }
    }
    if (wz < 0) {
      if (probes) *probes += cnt;
      return w;
    }
    cur = wz;
  }
}

}  // namespace civd
