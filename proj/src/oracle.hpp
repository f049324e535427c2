#pragma once

#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "influence.hpp"

namespace civd {

struct MaxSite {
  std::vector<std::int32_t> ids;
  double value = 0.0;
};

// Exact maximum-influence site over all nonempty subsets; 2^n enumeration,
// capped at n = 20.
MaxSite brute_max_vector(const PointSet& pts, const Point& q, double t);

// Optimal hyperplane partition through q. Exact in the plane via an angular
// sweep; other dimensions fall back to normal enumeration and stay practical
// only for small n.
MaxSite hyperplane_max_vector(const PointSet& pts, const Point& q, double t);

// Exact densest cluster: sort by decreasing distance, take the best suffix.
MaxSite density_scan_max(const PointSet& pts, const Point& q);

}  // namespace civd
