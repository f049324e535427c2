#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "distance_tree.hpp"
#include "influence.hpp"

namespace civd {

// A removal of a distance-node from the live list: the node, the distance at
// which it was removed, and the number of points already recorded on this
// recursion path when the removal happened.
struct RecordEvent {
  std::int32_t node = -1;
  double distance = 0.0;
  std::int64_t points_before = 0;
  std::int32_t parent = -1;    // previous event on the path (arena index), -1 at root
  std::int32_t position = 0;   // index along the path
};

// Per-path observer state; copied at every recursion fork so that state along
// one path never leaks into a sibling.
struct ObserverState {
  std::int64_t points_recorded = 0;
  double best_value = -1.0;
  std::int32_t best_position = -1;  // path position of the best event
};

class RemovalObserver {
 public:
  virtual ~RemovalObserver() = default;
  virtual void on_record(ObserverState& state, const RecordEvent& event,
                         std::int64_t node_points) const = 0;
};

enum class CellKind : std::uint8_t { type1, type2 };

struct Cell {
  std::int32_t box_node = -1;  // owning leaf of the box tree (retained mode)
  CellKind kind = CellKind::type2;
  std::int32_t dominating = -1;   // type-1: dominating distance-node
  double r_prime_min = 0.0;       // type-2: r_c at finalization
  std::int32_t last_event = -1;   // arena index of the last record event on the path
  std::int32_t path_len = 0;
  ObserverState observer;         // density marks when built with the observer
};

class BoxTree {
 public:
  enum class NodeKind : std::uint8_t {
    leaf_box,    // leaf carrying a box cell (or a dropped degenerate)
    leaf_diff,   // leaf carrying a box-difference cell; box stored = outer box
    quad,        // 2^d children, contiguous
    pair,        // children: cube carve-out, then optionally the difference leaf
  };

  int dim() const { return dim_; }
  int node_count() const { return static_cast<int>(edges_.size()); }
  int root() const { return 0; }
  NodeKind kind(int u) const { return kinds_[u]; }
  std::int32_t parent(int u) const { return parents_[u]; }
  std::int32_t first_child(int u) const { return first_child_[u]; }
  int child_count(int u) const { return nchildren_[u]; }
  std::int32_t cell_of(int u) const { return cell_[u]; }

  AxisBox box(int u) const {
    AxisBox b;
    b.edge = edges_[u];
    b.center = Point::from(
        std::span<const double>(centers_.data() + static_cast<std::size_t>(u) * dim_, dim_));
    return b;
  }

  Region region_of(int u) const;  // the cell region of a leaf

  friend class Decomposer;
  friend class ArtifactCodec;

 private:
  int add_node(const AxisBox& b, int parent);
  int dim_ = 0;
  std::vector<double> centers_;
  std::vector<double> edges_;
  std::vector<std::int32_t> parents_, first_child_, cell_;
  std::vector<std::uint8_t> nchildren_;
  std::vector<NodeKind> kinds_;
};

// Streaming view of an emitted cell; `path` is the root-to-cell record
// sequence, valid only during the callback.
struct CellView {
  CellKind kind = CellKind::type2;
  Region region;
  std::int32_t dominating = -1;
  double r_prime_min = 0.0;
  std::span<const RecordEvent> path;
  ObserverState observer;
  bool degenerate = false;  // zero-measure region; dropped from retained output
};

struct DecompositionOptions {
  const RemovalObserver* observer = nullptr;
  bool retain = true;  // keep the box tree, cells and event arena
  std::function<void(const CellView&)> sink;
};

struct Decomposition {
  BoxTree tree;
  std::vector<Cell> cells;
  std::vector<RecordEvent> events;
  std::int64_t type1_cells = 0;
  std::int64_t type2_cells = 0;
  std::int64_t dropped_degenerate = 0;
  std::int64_t total_refs = 0;  // sum of live-list lengths over all box-nodes
  std::int64_t box_nodes = 0;

  std::span<const RecordEvent> path_of(const Cell& c, std::vector<RecordEvent>& scratch) const;
};

// Runs the recursive decomposition from an explicit starting box and live
// list. The standard entry point below starts from E(root) with {root}.
Decomposition decompose_subtree(const PointSet& pts, const DistanceTree& tree,
                                const InfluenceModel& model, const AxisBox& root_box,
                                std::vector<std::int32_t> live, double r_c,
                                const DecompositionOptions& opt = {});

Decomposition ai_decompose(const PointSet& pts, const DistanceTree& tree,
                           const InfluenceModel& model, const DecompositionOptions& opt = {});

// Point location by the half-open convention; nullopt means outside the root
// box. Callers must reject singular queries beforehand.
std::optional<std::int32_t> locate_cell(const BoxTree& tree, const Point& q);

}  // namespace civd
