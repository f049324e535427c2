#include "aggregation_tree.hpp"

#include <algorithm>
#include <numeric>

namespace civd {

AggregationTree::AggregationTree(const PointSet& pts) {
  if (pts.size() < 1) fail(Errc::empty_input, "aggregation tree needs points");
  dim_ = pts.dim();
  order_.resize(pts.size());
  std::iota(order_.begin(), order_.end(), 0);
  point_leaf_.assign(pts.size(), -1);
  build(pts);
  subtree_nodes_.assign(node_count(), 1);
  for (int v = node_count() - 1; v > 0; --v) subtree_nodes_[parent_[v]] += subtree_nodes_[v];
  build_ipaths();
  build_majority();
}

void AggregationTree::build(const PointSet& pts) {
  struct Task {
    int begin, end;
    int parent;
    std::uint8_t label;
  };
  auto add_node = [&](const AxisBox& b, const Point& lo, const Point& hi, const Task& task) {
    int id = static_cast<int>(edges_.size());
    for (int i = 0; i < dim_; ++i) {
      centers_.push_back(b.center[i]);
      rect_lo_.push_back(lo[i]);
      rect_hi_.push_back(hi[i]);
    }
    edges_.push_back(b.edge);
    parent_.push_back(task.parent);
    child_label_.push_back(task.label);
    child_first_.push_back(0);
    child_count_.push_back(0);
    begin_.push_back(task.begin);
    end_.push_back(task.end);
    return id;
  };
  auto tight_bounds = [&](int begin, int end, Point& lo, Point& hi) {
    lo = pts[order_[begin]];
    hi = lo;
    for (int k = begin + 1; k < end; ++k) {
      Point p = pts[order_[k]];
      for (int i = 0; i < dim_; ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    }
    AxisBox b;
    b.center = Point(dim_);
    b.edge = 0;
    for (int i = 0; i < dim_; ++i) {
      b.center[i] = 0.5 * (lo[i] + hi[i]);
      b.edge = std::max(b.edge, hi[i] - lo[i]);
    }
    return b;
  };

  // Children are appended depth-first; each node's children end up contiguous
  // in `children_` because we process one node's orthants back to back.
  std::vector<Task> stack;
  stack.push_back({0, pts.size(), -1, 0});
  std::vector<int> bucket_count(fanout()), bucket_pos(fanout());
  std::vector<std::int32_t> tmp;
  Point lo, hi;
  while (!stack.empty()) {
    Task task = stack.back();
    stack.pop_back();
    AxisBox box = tight_bounds(task.begin, task.end, lo, hi);
    int id = add_node(box, lo, hi, task);
    if (task.parent >= 0) {
      if (child_count_[task.parent] == 0) child_first_[task.parent] = static_cast<int>(children_.size());
      children_.push_back(id);
      ++child_count_[task.parent];
    }
    if (task.end - task.begin == 1) {
      point_leaf_[order_[task.begin]] = id;
      continue;
    }
    // Quad split of R(v) by its center; half-open assignment to orthants.
    std::fill(bucket_count.begin(), bucket_count.end(), 0);
    for (int k = task.begin; k < task.end; ++k)
      ++bucket_count[orthant_of(box, pts[order_[k]])];
    int nonempty = 0;
    for (int c : bucket_count)
      if (c > 0) ++nonempty;
    if (nonempty < 2)
      fail(Errc::invalid_argument, "aggregation split stalled; input points nearly coincident");
    bucket_pos[0] = 0;
    for (int o = 1; o < fanout(); ++o) bucket_pos[o] = bucket_pos[o - 1] + bucket_count[o - 1];
    tmp.assign(order_.begin() + task.begin, order_.begin() + task.end);
    std::vector<int> cursor = bucket_pos;
    for (std::int32_t p : tmp) order_[task.begin + cursor[orthant_of(box, pts[p])]++] = p;
    // Push in reverse so children are created in ascending label order.
    for (int o = fanout() - 1; o >= 0; --o) {
      if (bucket_count[o] == 0) continue;
      stack.push_back({task.begin + bucket_pos[o], task.begin + bucket_pos[o] + bucket_count[o], id,
                       static_cast<std::uint8_t>(o)});
    }
  }

  // The DFS stack above appends children of different nodes interleaved when
  // a child subtree finishes before its siblings start, so rebuild the child
  // arrays from parent links to keep them contiguous.
  std::vector<std::int32_t> cnt(node_count(), 0);
  for (int v = 1; v < node_count(); ++v) ++cnt[parent_[v]];
  std::vector<std::int32_t> first(node_count() + 1, 0);
  for (int v = 0; v < node_count(); ++v) first[v + 1] = first[v] + cnt[v];
  std::vector<std::int32_t> out(children_.size());
  std::vector<std::int32_t> fill(first.begin(), first.end() - 1);
  for (int v = 1; v < node_count(); ++v) out[fill[parent_[v]]++] = v;
  children_ = std::move(out);
  for (int v = 0; v < node_count(); ++v) {
    child_first_[v] = first[v];
    child_count_[v] = static_cast<std::uint8_t>(cnt[v]);
  }
}

void AggregationTree::build_ipaths() {
  int f = fanout();
  ipath_seq_.assign(f, {});
  ip_index_.assign(static_cast<std::size_t>(node_count()) * f, -1);
  ip_tail_.assign(static_cast<std::size_t>(node_count()) * f, -1);
  for (int i = 0; i < f; ++i) {
    auto& seq = ipath_seq_[i];
    for (int v = 0; v < node_count(); ++v) {
      bool head = parent_[v] < 0 || child_label_[v] != i;
      if (!head) continue;
      int start = static_cast<int>(seq.size());
      int cur = v;
      while (cur >= 0) {
        ip_index_[static_cast<std::size_t>(cur) * f + i] = static_cast<std::int32_t>(seq.size());
        seq.push_back(cur);
        cur = child_by_label(cur, i);
      }
      int tail = static_cast<int>(seq.size()) - 1;
      for (int k = start; k <= tail; ++k)
        ip_tail_[static_cast<std::size_t>(seq[k]) * f + i] = tail;
    }
  }
}

void AggregationTree::build_majority() {
  mp_index_.assign(node_count(), -1);
  mp_tail_.assign(node_count(), -1);
  mp_root_.assign(node_count(), -1);
  std::vector<std::int32_t> heads;
  heads.push_back(root());
  std::vector<std::int32_t> path;
  std::vector<double> weight;
  std::vector<double> prefix;
  // The search tree of one path is built over positions with weights
  // 1 + sizes of the off-path subtrees hanging at each node.
  auto build_bst = [&](auto&& self, int lo, int hi, int base) -> int {
    if (lo > hi) return -1;
    double total = prefix[hi + 1] - prefix[lo];
    int j = lo;
    while (j < hi && prefix[j + 1] - prefix[lo] < total * 0.5) ++j;
    int pos = base + j;
    mp_left_[pos] = self(self, lo, j - 1, base);
    mp_right_[pos] = self(self, j + 1, hi, base);
    return pos;
  };
  while (!heads.empty()) {
    int h = heads.back();
    heads.pop_back();
    path.clear();
    weight.clear();
    int cur = h;
    while (cur >= 0) {
      path.push_back(cur);
      std::int64_t best_sz = -1;
      int best = -1;
      double off = 1.0;
      for (std::int32_t c : children(cur)) {
        if (subtree_nodes_[c] > best_sz) {
          best_sz = subtree_nodes_[c];
          best = c;
        }
      }
      for (std::int32_t c : children(cur)) {
        if (c == best) continue;
        off += static_cast<double>(subtree_nodes_[c]);
        heads.push_back(c);
      }
      weight.push_back(off);
      cur = best;
    }
    int base = static_cast<int>(mp_seq_.size());
    int m = static_cast<int>(path.size());
    mp_seq_.insert(mp_seq_.end(), path.begin(), path.end());
    mp_left_.resize(mp_seq_.size(), -1);
    mp_right_.resize(mp_seq_.size(), -1);
    prefix.assign(m + 1, 0.0);
    for (int k = 0; k < m; ++k) prefix[k + 1] = prefix[k] + weight[k];
    int root_pos = build_bst(build_bst, 0, m - 1, base);
    for (int k = 0; k < m; ++k) {
      mp_index_[path[k]] = base + k;
      mp_tail_[path[k]] = base + m - 1;
      mp_root_[path[k]] = root_pos;
    }
  }
}

}  // namespace civd
