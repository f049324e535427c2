#pragma once

#include "box_decomposition.hpp"

namespace civd {

// Tracks, along every recursion path, the running point count M and the
// density estimate D = c_d (n - M) / r^d of each removal, keeping the best.
class DensityObserver final : public RemovalObserver {
 public:
  DensityObserver(std::int64_t total_points, int dim)
      : n_(total_points), dim_(dim), c_d_(ball_volume_constant(dim)) {}

  void on_record(ObserverState& state, const RecordEvent& event,
                 std::int64_t node_points) const override;

 private:
  std::int64_t n_;
  int dim_;
  double c_d_;
};

struct DensityCluster {
  std::int32_t suffix_start = -1;       // path position of the best removal
  double density_mark = 0.0;            // D at that removal
  std::vector<std::int32_t> nodes;      // distance-nodes recorded at or after it
};

// The approximate densest cluster of a type-2 cell: the suffix of its record
// sequence starting at the maximum-D removal. Point ids materialize lazily
// through the distance tree's leaf ranges.
DensityCluster extract_cluster(const Decomposition& dec, const Cell& cell);

std::vector<std::int32_t> materialize_points(const DistanceTree& tree, const DensityCluster& c);

}  // namespace civd
