#pragma once

#include <cstdint>
#include <vector>

#include "aggregation_tree.hpp"
#include "influence.hpp"

namespace civd {

struct FindStats {
  std::int64_t touched = 0;  // nodes examined, binary-search and tail probes included
};

// Query box around the anchor of a type-2 cell: far enough that everything
// outside contributes a negligible share of the maximum influence.
AxisBox query_box(const Point& q_c, const InfluenceModel& model, int n, double r_prime_min);

// Reference implementation of the effective-cover search; walks long paths
// node by node. Kept as the oracle for find_cover.
std::vector<std::int32_t> slow_find(const AggregationTree& t, const Point& q_c, const AxisBox& b,
                                    double delta_inv, FindStats* stats = nullptr);

// Long paths resolved through the contained-edge chain and a binary search on
// the orthant path; same output set as slow_find in polylog time.
std::vector<std::int32_t> find_cover(const AggregationTree& t, const Point& q_c, const AxisBox& b,
                                     double delta_inv, FindStats* stats = nullptr);

// Every subset of `reps` realizable as the positive side of a hyperplane
// through q_c, in strict and boundary-included variants, deduplicated.
// d = 1 uses sign classes, d = 2 an angular sweep, higher dimensions
// enumerate normals orthogonal to (d-1)-subsets of the spanned directions.
std::vector<std::vector<std::int32_t>> enumerate_hyperplane_partitions(
    std::span<const Point> reps, const Point& q_c);

struct VectorAssignment {
  std::vector<std::int32_t> nodes;  // aggregation-tree handles forming the site
  double influence = 0.0;           // F of the collapsed multiset at q_c
  std::int64_t cover_size = 0;
  bool empty_cover_fallback = false;
};

VectorAssignment assign_vector(const AggregationTree& t, const PointSet& pts,
                               const InfluenceModel& model, const Point& q_c, double r_prime_min,
                               FindStats* stats = nullptr);

// Best half-plane subset of weighted force vectors (d = 2 incremental sweep).
// Exposed for the oracle and tests; `weights` are the site multiplicities.
std::pair<std::vector<std::int32_t>, double> best_halfplane_subset(
    std::span<const Point> dirs, std::span<const double> weights, double t);

}  // namespace civd
