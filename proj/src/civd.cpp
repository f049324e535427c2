#include "civd.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "rng.hpp"

namespace civd {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int k = std::min(threads, n);
  pool.reserve(k);
  for (int w = 0; w < k; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}
}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("CIVD_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

Civd Civd::build(PointSet pts, const BuildOptions& opt) {
  Civd c;
  int dim = pts.dim();
  if (opt.kind == ModelKind::vector) {
    c.model_ = opt.beta ? InfluenceModel::vector_model_with_beta(dim, opt.t, opt.epsilon, *opt.beta)
                        : InfluenceModel::vector_model(dim, opt.t, opt.epsilon);
  } else {
    c.model_ = opt.beta ? InfluenceModel::density_model_with_beta(dim, opt.epsilon, *opt.beta)
                        : InfluenceModel::density_model(dim, opt.epsilon);
  }
  c.pts_ = std::move(pts);

  auto t0 = std::chrono::steady_clock::now();
  c.dtree_ = build_distance_tree(c.pts_, c.model_.beta());
  DensityObserver density_obs(c.pts_.size(), dim);
  DecompositionOptions dopt;
  dopt.retain = true;
  if (c.model_.kind() == ModelKind::density) dopt.observer = &density_obs;
  c.dec_ = ai_decompose(c.pts_, c.dtree_, c.model_, dopt);
  c.stats_.wall_decompose_s = seconds_since(t0);

  c.stats_.n = c.pts_.size();
  c.stats_.dim = dim;
  c.stats_.beta = c.model_.beta();
  c.stats_.delta_inv = c.model_.delta_inv_epsilon();
  c.stats_.type1_cells = c.dec_.type1_cells;
  c.stats_.type2_cells = c.dec_.type2_cells;
  c.stats_.dropped_degenerate = c.dec_.dropped_degenerate;
  c.stats_.box_nodes = c.dec_.box_nodes;
  c.stats_.record_events = static_cast<std::int64_t>(c.dec_.events.size());

  if (c.model_.kind() == ModelKind::vector && opt.assign_sites) {
    auto t1 = std::chrono::steady_clock::now();
    c.agg_ = std::make_shared<AggregationTree>(c.pts_);
    c.vector_sites_.assign(c.dec_.cells.size(), {});
    std::atomic<std::int64_t> fallbacks{0};
    std::atomic<std::int64_t> max_cover{0};
    int nthreads = resolve_threads(opt.threads);
    int ncells = static_cast<int>(c.dec_.cells.size());
    parallel_for(ncells, nthreads, [&](int i) {
      const Cell& cell = c.dec_.cells[i];
      if (cell.kind != CellKind::type2) return;
      Point q_c = c.cell_anchor(i);
      VectorAssignment a =
          assign_vector(*c.agg_, c.pts_, c.model_, q_c, cell.r_prime_min, nullptr);
      c.vector_sites_[i] = std::move(a.nodes);
      if (a.empty_cover_fallback) fallbacks.fetch_add(1);
      std::int64_t cur = max_cover.load();
      while (a.cover_size > cur && !max_cover.compare_exchange_weak(cur, a.cover_size)) {
      }
    });
    c.stats_.empty_cover_fallbacks = fallbacks.load();
    c.stats_.max_cover = max_cover.load();
    c.stats_.wall_assign_s = seconds_since(t1);
  }
  return c;
}

Point Civd::cell_anchor(std::int32_t cell) const {
  const Cell& c = dec_.cells[cell];
  return region_anchor(dec_.tree.region_of(c.box_node));
}

std::vector<std::int32_t> Civd::universal_site() const {
  std::vector<std::int32_t> all(pts_.size());
  for (int i = 0; i < pts_.size(); ++i) all[i] = i;
  return all;
}

std::vector<std::int32_t> Civd::site_points(std::int32_t cell) const {
  const Cell& c = dec_.cells[cell];
  if (c.kind == CellKind::type1) {
    auto span = dtree_.leaf_points(c.dominating);
    return {span.begin(), span.end()};
  }
  if (model_.kind() == ModelKind::density) {
    return materialize_points(dtree_, extract_cluster(dec_, c));
  }
  std::vector<std::int32_t> out;
  if (cell < static_cast<std::int32_t>(vector_sites_.size())) {
    for (std::int32_t v : vector_sites_[cell]) {
      auto span = agg_->points_of(v);
      out.insert(out.end(), span.begin(), span.end());
    }
  }
  if (out.empty()) fail(Errc::invalid_argument, "cell has no assigned site (built without assignment?)");
  return out;
}

QueryResult Civd::query(const Point& q) const {
  if (q.dim() != pts_.dim()) fail(Errc::dimension_mismatch, "query dimension mismatch");
  if (nearest_input_distance(q) < kTol)
    fail(Errc::singular_query, "query within tolerance of an input point");
  QueryResult r;
  auto cell = locate_cell(dec_.tree, q);
  r.site = cell ? site_points(*cell) : universal_site();
  r.outside = !cell.has_value();
  r.cell = cell.value_or(-1);
  std::vector<WeightedSite> sites;
  sites.reserve(r.site.size());
  for (std::int32_t i : r.site) sites.push_back({pts_[i], 1});
  r.value = model_.evaluate(sites, q);
  return r;
}

std::vector<OracleReport> validate_civd(const Civd& civd, int samples, std::uint64_t seed,
                                        int threads) {
  const PointSet& pts = civd.points();
  const InfluenceModel& model = civd.model();
  AxisBox bbox = pts.bounding_box();
  AxisBox window{bbox.center, std::max(bbox.edge * 3.0, 1.0)};
  double shell = std::max(kTol, 1e-7 * window.edge);
  double eps = model.epsilon();

  std::vector<OracleReport> out(samples);
  int nthreads = resolve_threads(threads);
  std::function<void(int)> body = [&](int s) {
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(s) * 0xd1b54a32d192ed03ULL +
            1);
    Point q(pts.dim());
    for (;;) {
      for (int i = 0; i < pts.dim(); ++i)
        q[i] = rng.uniform(window.lo(i), window.hi(i));
      if (civd.nearest_input_distance(q) < shell) continue;
      break;
    }
    OracleReport rep;
    rep.query = q;
    MaxSite exact;
    if (model.kind() == ModelKind::density) {
      exact = density_scan_max(pts, q);
    } else if (pts.size() <= 16) {
      exact = brute_max_vector(pts, q, model.exponent());
    } else if (pts.dim() == 2) {
      exact = hyperplane_max_vector(pts, q, model.exponent());
    } else {
      fail(Errc::too_large, "no feasible vector oracle for this size and dimension");
    }
    QueryResult qr = civd.query(q);
    rep.exact = exact.value;
    rep.approx = qr.value.magnitude;
    rep.ratio = exact.value > 0 ? rep.approx / rep.exact : 1.0;
    rep.pass = rep.ratio >= (1.0 - eps) - 1e-9;
    out[s] = rep;
  };
  // Lean stand-in for a pool; samples are independent and slot-addressed.
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int k = std::min(nthreads, samples);
  if (k <= 1) {
    for (int s = 0; s < samples; ++s) body(s);
  } else {
    for (int w = 0; w < k; ++w)
      pool.emplace_back([&] {
        for (;;) {
          int s = next.fetch_add(1);
          if (s >= samples) return;
          body(s);
        }
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace civd
