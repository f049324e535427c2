#pragma once

#include <memory>
#include <optional>

#include "aggregation_tree.hpp"
#include "box_decomposition.hpp"
#include "density_assignment.hpp"
#include "oracle.hpp"
#include "vector_assignment.hpp"

namespace civd {

struct BuildOptions {
  ModelKind kind = ModelKind::density;
  double t = 2.0;  // vector exponent
  double epsilon = 0.2;
  std::optional<double> beta;  // override the derived decomposition tolerance
  bool assign_sites = true;    // vector model: run the per-cell assignment
  int threads = 0;             // 0: hardware, capped by CIVD_THREADS
};

struct BuildStats {
  std::int64_t n = 0;
  int dim = 0;
  double beta = 0.0;
  double delta_inv = 0.0;
  std::int64_t type1_cells = 0;
  std::int64_t type2_cells = 0;
  std::int64_t dropped_degenerate = 0;
  std::int64_t box_nodes = 0;
  std::int64_t record_events = 0;
  std::int64_t empty_cover_fallbacks = 0;
  std::int64_t max_cover = 0;
  double wall_decompose_s = 0.0;
  double wall_assign_s = 0.0;
};

struct QueryResult {
  bool outside = false;
  std::int32_t cell = -1;
  std::vector<std::int32_t> site;  // input point ids
  InfluenceValue value;
};

class Civd {
 public:
  static Civd build(PointSet pts, const BuildOptions& opt);

  const PointSet& points() const { return pts_; }
  const InfluenceModel& model() const { return model_; }
  const DistanceTree& distance_tree() const { return dtree_; }
  const Decomposition& decomposition() const { return dec_; }
  const AggregationTree* aggregation() const { return agg_.get(); }
  const BuildStats& stats() const { return stats_; }
  const std::vector<std::vector<std::int32_t>>& vector_sites() const { return vector_sites_; }

  // Interior representative used as the assignment anchor of a cell.
  Point cell_anchor(std::int32_t cell) const;
  std::vector<std::int32_t> site_points(std::int32_t cell) const;
  std::vector<std::int32_t> universal_site() const;  // outside the root box

  QueryResult query(const Point& q) const;
  double nearest_input_distance(const Point& q) const {
    return nearest_point_distance(dtree_, pts_, q);
  }

  friend class ArtifactCodec;

 private:
  Civd() = default;
  PointSet pts_;
  InfluenceModel model_ = InfluenceModel::density_model(1, 0.2);
  DistanceTree dtree_;
  Decomposition dec_;
  std::shared_ptr<AggregationTree> agg_;
  std::vector<std::vector<std::int32_t>> vector_sites_;  // per cell; vector type-2 only
  BuildStats stats_;
};

struct OracleReport {
  Point query;
  double exact = 0.0;
  double approx = 0.0;
  double ratio = 0.0;
  bool pass = false;
};

// Uniform non-singular queries over the input bounding box inflated 3x;
// every sample compares the assigned site's influence against the exact
// oracle at the (1 - epsilon) threshold.
std::vector<OracleReport> validate_civd(const Civd& civd, int samples, std::uint64_t seed,
                                        int threads = 0);

int resolve_threads(int requested);

}  // namespace civd
