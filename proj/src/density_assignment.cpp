#include "density_assignment.hpp"

namespace civd {

namespace {
double ipow(double x, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}
}  // namespace

void DensityObserver::on_record(ObserverState& state, const RecordEvent& event,
                                std::int64_t node_points) const {
  (void)node_points;  // M itself advances in the decomposition engine
  double d = c_d_ * static_cast<double>(n_ - state.points_recorded) / ipow(event.distance, dim_);
  if (d > state.best_value) {  // strict: ties keep the earlier removal
    state.best_value = d;
    state.best_position = event.position;
  }
}

DensityCluster extract_cluster(const Decomposition& dec, const Cell& cell) {
  if (cell.observer.best_position < 0)
    fail(Errc::missing_observer, "cell was decomposed without density tracking");
  DensityCluster out;
  out.suffix_start = cell.observer.best_position;
  out.density_mark = cell.observer.best_value;
  for (std::int32_t e = cell.last_event; e >= 0; e = dec.events[e].parent) {
    if (dec.events[e].position < out.suffix_start) break;
    out.nodes.push_back(dec.events[e].node);
  }
  std::reverse(out.nodes.begin(), out.nodes.end());
  return out;
}

std::vector<std::int32_t> materialize_points(const DistanceTree& tree, const DensityCluster& c) {
  std::vector<std::int32_t> pts;
  for (std::int32_t v : c.nodes) {
    auto span = tree.leaf_points(v);
    pts.insert(pts.end(), span.begin(), span.end());
  }
  return pts;
}

}  // namespace civd
