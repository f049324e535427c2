#include "box_decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace civd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double dist_sq_row_box(std::span<const double> row, const AxisBox& b) {
  double s = 0;
  double h = b.edge * 0.5;
  for (int i = 0; i < b.dim(); ++i) {
    double d = std::abs(row[i] - b.center[i]) - h;
    if (d > 0) s += d * d;
  }
  return s;
}

// Step 1 test: B(u) and E(v) overlap in a rectangle with an edge of length at
// least half of B(u)'s edge, within the global tolerance.
bool significant_overlap(const AxisBox& box, const AxisBox& guard) {
  double best = -kInf;
  for (int i = 0; i < box.dim(); ++i) {
    double lo = std::max(box.lo(i), guard.lo(i));
    double hi = std::min(box.hi(i), guard.hi(i));
    double e = hi - lo;
    if (e < -kTol) return false;
    best = std::max(best, e);
  }
  return best + kTol >= box.edge * 0.5;
}
}  // namespace

int BoxTree::add_node(const AxisBox& b, int parent) {
  int id = static_cast<int>(edges_.size());
  for (int i = 0; i < dim_; ++i) centers_.push_back(b.center[i]);
  edges_.push_back(b.edge);
  parents_.push_back(parent);
  first_child_.push_back(-1);
  cell_.push_back(-1);
  nchildren_.push_back(0);
  kinds_.push_back(NodeKind::leaf_box);
  return id;
}

Region BoxTree::region_of(int u) const {
  Region r;
  r.outer = box(u);
  if (kinds_[u] == NodeKind::leaf_diff) {
    AxisBox inner = box(first_child_[parents_[u]]);
    if (inner.edge > 0) r.inner = inner;
  }
  return r;
}

std::optional<std::int32_t> locate_cell(const BoxTree& tree, const Point& q) {
  if (tree.node_count() == 0) return std::nullopt;
  int u = tree.root();
  if (!tree.box(u).contains_half_open(q)) return std::nullopt;
  for (;;) {
    switch (tree.kind(u)) {
      case BoxTree::NodeKind::leaf_box:
      case BoxTree::NodeKind::leaf_diff: {
        std::int32_t c = tree.cell_of(u);
        if (c < 0) return std::nullopt;  // dropped degenerate, unreachable by interior points
        return c;
      }
      case BoxTree::NodeKind::quad:
        u = tree.first_child(u) + orthant_of(tree.box(u), q);
        break;
      case BoxTree::NodeKind::pair: {
        int u0 = tree.first_child(u);
        if (tree.box(u0).contains_half_open(q) || tree.child_count(u) == 1)
          u = u0;
        else
          u = u0 + 1;
        break;
      }
    }
  }
}

std::span<const RecordEvent> Decomposition::path_of(const Cell& c,
                                                    std::vector<RecordEvent>& scratch) const {
  scratch.clear();
  for (std::int32_t e = c.last_event; e >= 0; e = events[e].parent) scratch.push_back(events[e]);
  std::reverse(scratch.begin(), scratch.end());
  return scratch;
}

struct Frame {
  std::vector<std::int32_t> live;
  std::vector<double> live_dist_sq;
  std::vector<std::pair<double, std::int32_t>> removals;
};

class Decomposer {
 public:
  Decomposer(const PointSet& pts, const DistanceTree& tree, const InfluenceModel& model,
             const DecompositionOptions& opt)
      : pts_(pts), tree_(tree), opt_(opt) {
    beta_ = tree.beta();
    sqrt_d_ = std::sqrt(static_cast<double>(pts.dim()));
    two_pn_ = 2.0 * model.domination_poly(static_cast<double>(pts.size()));
    out_.tree.dim_ = pts.dim();
  }

  Decomposition take() { return std::move(out_); }

  void run_root(const AxisBox& root_box, std::vector<std::int32_t> live, double r_c) {
    frames_.emplace_back();
    frames_[0].live = std::move(live);
    int root_node = opt_.retain ? out_.tree.add_node(root_box, -1) : -1;
    run(0, root_box, r_c, ObserverState{}, -1, root_node);
  }

 private:
  AxisBox guard(std::int32_t v) const { return tree_.guard_box(v, pts_); }

  void emit_cell(CellKind kind, int box_node, const Region& region, std::int32_t dominating,
                 double r_c, const ObserverState& state) {
    bool degenerate = region.outer.edge <= 0.0;
    if (opt_.sink) {
      CellView view;
      view.kind = kind;
      view.region = region;
      view.dominating = dominating;
      view.r_prime_min = kind == CellKind::type2 ? r_c : 0.0;
      view.path = std::span<const RecordEvent>(path_);
      view.observer = state;
      view.degenerate = degenerate;
      opt_.sink(view);
    }
    if (degenerate) {
      ++out_.dropped_degenerate;
      return;
    }
    if (kind == CellKind::type1)
      ++out_.type1_cells;
    else
      ++out_.type2_cells;
    if (!opt_.retain) return;
    Cell c;
    c.box_node = box_node;
    c.kind = kind;
    c.dominating = dominating;
    if (kind == CellKind::type2) {
      if (!(r_c < kInf)) fail(Errc::invalid_argument, "type-2 cell with no recorded distance");
      c.r_prime_min = r_c;
    }
    c.last_event = last_arena_;
    c.path_len = static_cast<std::int32_t>(path_.size());
    c.observer = state;
    int idx = static_cast<int>(out_.cells.size());
    out_.cells.push_back(c);
    out_.tree.cell_[box_node] = idx;
  }

  void run(std::size_t depth, const AxisBox& box, double r_c, ObserverState state, int tq_node,
           int retained_node) {
    if (depth > 4096) fail(Errc::invalid_argument, "decomposition recursion too deep");
    (void)tq_node;
    if (frames_.size() <= depth + 1) frames_.resize(depth + 2);
    Frame& fr = frames_[depth];
    ++out_.box_nodes;
    std::size_t path_mark = path_.size();
    std::int32_t arena_mark = last_arena_;

    // Step 1: while some guard box overlaps B(u) significantly, replace that
    // distance-node by its children (leaves stay).
    for (std::size_t i = 0; i < fr.live.size();) {
      std::int32_t v = fr.live[i];
      if (!tree_.is_leaf(v) && significant_overlap(box, guard(v))) {
        fr.live[i] = tree_.node(v).child[0];
        fr.live.push_back(tree_.node(v).child[1]);
      } else {
        ++i;
      }
    }
    out_.total_refs += static_cast<std::int64_t>(fr.live.size());

    // Step 2: remove nodes far from B(u), farthest first, recording distances.
    const double diam = box.edge * sqrt_d_;
    const double diam_sq = diam * diam;
    const double hb_sq = 0.25 * beta_ * beta_;
    fr.removals.clear();
    fr.live_dist_sq.resize(fr.live.size());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < fr.live.size(); ++i) {
      std::int32_t v = fr.live[i];
      double dsq = dist_sq_row_box(pts_.row(tree_.node(v).rep), box);
      if (diam_sq < dsq * hb_sq) {
        fr.removals.emplace_back(dsq, v);
      } else {
        fr.live[keep] = v;
        fr.live_dist_sq[keep] = dsq;
        ++keep;
      }
    }
    fr.live.resize(keep);
    fr.live_dist_sq.resize(keep);
    std::sort(fr.removals.begin(), fr.removals.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    for (const auto& [dsq, v] : fr.removals) {
      RecordEvent ev;
      ev.node = v;
      ev.distance = std::sqrt(dsq);
      ev.points_before = state.points_recorded;
      ev.parent = last_arena_;
      ev.position = static_cast<std::int32_t>(path_.size());
      if (opt_.observer) opt_.observer->on_record(state, ev, tree_.size(v));
      state.points_recorded += tree_.size(v);
      if (opt_.retain) {
        out_.events.push_back(ev);
        last_arena_ = static_cast<std::int32_t>(out_.events.size()) - 1;
      }
      path_.push_back(ev);
      if (ev.distance < r_c) r_c = ev.distance;
    }

    // Step 3: nothing left means B(u) is far from every input point.
    if (fr.live.empty()) {
      emit_cell(CellKind::type2, retained_node, Region{box, std::nullopt}, -1, r_c, state);
      path_.resize(path_mark);
      last_arena_ = arena_mark;
      return;
    }

    // Step 4: a single remaining node may dominate B(u).
    if (fr.live.size() == 1) {
      std::int32_t v = fr.live[0];
      double r_min = std::sqrt(fr.live_dist_sq[0]);
      if ((r_min + diam) * two_pn_ < r_c * beta_) {
        Rect isect = box_intersection(box, guard(v));
        if (tree_.is_leaf(v) || isect.empty) {
          emit_cell(CellKind::type1, retained_node, Region{box, std::nullopt}, v, r_c, state);
          path_.resize(path_mark);
          last_arena_ = arena_mark;
          return;
        }
        AxisBox bprime = smallest_hypercube_within(box, isect);
        int u0 = -1;
        if (opt_.retain) {
          out_.tree.kinds_[retained_node] = BoxTree::NodeKind::pair;
          u0 = out_.tree.add_node(bprime, retained_node);
          out_.tree.first_child_[retained_node] = u0;
          out_.tree.nchildren_[retained_node] = 1;
        }
        if (bprime.edge < box.edge) {
          int u1 = -1;
          if (opt_.retain) {
            u1 = out_.tree.add_node(box, retained_node);
            out_.tree.kinds_[u1] = BoxTree::NodeKind::leaf_diff;
            out_.tree.nchildren_[retained_node] = 2;
          }
          Region diff{box, std::nullopt};
          if (bprime.edge > 0) diff.inner = bprime;
          emit_cell(CellKind::type1, u1, diff, v, r_c, state);
        }
        Frame& child = frames_[depth + 1];
        child.live.clear();
        child.live.push_back(tree_.node(v).child[0]);
        child.live.push_back(tree_.node(v).child[1]);
        run(depth + 1, bprime, r_c, state, tq_node, u0);
        path_.resize(path_mark);
        last_arena_ = arena_mark;
        return;
      }
    }

    // Step 5: split into 2^d sub-boxes and recurse.
    int fanout = 1 << pts_.dim();
    int first = -1;
    if (opt_.retain) {
      out_.tree.kinds_[retained_node] = BoxTree::NodeKind::quad;
      for (int o = 0; o < fanout; ++o) {
        int id = out_.tree.add_node(child_box(box, o), retained_node);
        if (o == 0) first = id;
      }
      out_.tree.first_child_[retained_node] = first;
      out_.tree.nchildren_[retained_node] = static_cast<std::uint8_t>(fanout);
    }
    for (int o = 0; o < fanout; ++o) {
      Frame& child = frames_[depth + 1];
      child.live = frames_[depth].live;
      run(depth + 1, child_box(box, o), r_c, state, tq_node, first >= 0 ? first + o : -1);
    }
    path_.resize(path_mark);
    last_arena_ = arena_mark;
  }

  const PointSet& pts_;
  const DistanceTree& tree_;
  const DecompositionOptions& opt_;
  double beta_ = 0.0;
  double sqrt_d_ = 1.0;
  double two_pn_ = 0.0;
  std::deque<Frame> frames_;
  std::vector<RecordEvent> path_;
  std::int32_t last_arena_ = -1;
  Decomposition out_;
};

Decomposition decompose_subtree(const PointSet& pts, const DistanceTree& tree,
                                const InfluenceModel& model, const AxisBox& root_box,
                                std::vector<std::int32_t> live, double r_c,
                                const DecompositionOptions& opt) {
  Decomposer d(pts, tree, model, opt);
  d.run_root(root_box, std::move(live), r_c);
  return d.take();
}

Decomposition ai_decompose(const PointSet& pts, const DistanceTree& tree,
                           const InfluenceModel& model, const DecompositionOptions& opt) {
  AxisBox root_box = tree.guard_box(tree.root(), pts);
  return decompose_subtree(pts, tree, model, root_box, {tree.root()}, kInf, opt);
}

}  // namespace civd
