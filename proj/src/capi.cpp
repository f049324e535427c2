#include "civd/civd.h"

#include <cstring>
#include <fstream>
#include <new>

#include <json.hpp>

#include "civd.hpp"
#include "io.hpp"
#include "svg.hpp"

using namespace civd;

struct civd_handle {
  Civd civd;
};

namespace {
thread_local std::string g_last_error;

civd_status status_of(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return CIVD_ERR_INVALID_ARGUMENT;
    case Errc::dimension_mismatch: return CIVD_ERR_DIMENSION;
    case Errc::duplicate_points: return CIVD_ERR_DUPLICATE_POINTS;
    case Errc::singular_query: return CIVD_ERR_SINGULAR_QUERY;
    case Errc::too_large: return CIVD_ERR_TOO_LARGE;
    case Errc::no_solution: return CIVD_ERR_NO_SOLUTION;
    case Errc::io_error: return CIVD_ERR_IO;
    case Errc::bad_artifact: return CIVD_ERR_BAD_ARTIFACT;
    case Errc::unsupported_dimension: return CIVD_ERR_UNSUPPORTED_DIM;
    case Errc::empty_input: return CIVD_ERR_EMPTY_INPUT;
    case Errc::missing_observer: return CIVD_ERR_MISSING_OBSERVER;
  }
  return CIVD_ERR_INTERNAL;
}

template <class Fn>
civd_status guarded(Fn&& fn) {
  try {
    fn();
    return CIVD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CIVD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CIVD_ERR_INTERNAL;
  }
}
}  // namespace

extern "C" {

void civd_default_options(civd_build_options* out) {
  out->model = CIVD_MODEL_DENSITY;
  out->t = 2.0;
  out->epsilon = 0.2;
  out->beta_override = 0.0;
  out->threads = 0;
}

civd_status civd_build(const double* coords, int32_t n, int32_t dim,
                       const civd_build_options* options, civd_handle** out) {
  if (!coords || !options || !out || n < 1) {
    g_last_error = "bad arguments to civd_build";
    return CIVD_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    PointSet pts(std::vector<double>(coords, coords + static_cast<std::size_t>(n) * dim), dim);
    if (auto dup = pts.find_duplicate())
      fail(Errc::duplicate_points, "duplicate input points at indices " +
                                       std::to_string(dup->first) + " and " +
                                       std::to_string(dup->second));
    BuildOptions opt;
    opt.kind = options->model == CIVD_MODEL_VECTOR ? ModelKind::vector : ModelKind::density;
    opt.t = options->t;
    opt.epsilon = options->epsilon;
    if (options->beta_override > 0) opt.beta = options->beta_override;
    opt.threads = options->threads;
    auto* h = new civd_handle{Civd::build(std::move(pts), opt)};
    *out = h;
  });
}

civd_status civd_build_from_file(const char* input_path, const civd_build_options* options,
                                 civd_handle** out) {
  if (!input_path || !options || !out) return CIVD_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    PointSet pts = load_points(input_path);
    BuildOptions opt;
    opt.kind = options->model == CIVD_MODEL_VECTOR ? ModelKind::vector : ModelKind::density;
    opt.t = options->t;
    opt.epsilon = options->epsilon;
    if (options->beta_override > 0) opt.beta = options->beta_override;
    opt.threads = options->threads;
    *out = new civd_handle{Civd::build(std::move(pts), opt)};
  });
}

civd_status civd_load(const char* path, civd_handle** out) {
  if (!path || !out) return CIVD_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { *out = new civd_handle{load_artifact(path)}; });
}

civd_status civd_save(const civd_handle* h, const char* path) {
  if (!h || !path) return CIVD_ERR_INVALID_ARGUMENT;
  return guarded([&] { save_artifact(h->civd, path); });
}

void civd_destroy(civd_handle* h) { delete h; }

civd_status civd_stats(const civd_handle* h, civd_build_stats* out) {
  if (!h || !out) return CIVD_ERR_INVALID_ARGUMENT;
  const BuildStats& s = h->civd.stats();
  out->n = s.n;
  out->dim = s.dim;
  out->model = h->civd.model().kind() == ModelKind::vector ? CIVD_MODEL_VECTOR : CIVD_MODEL_DENSITY;
  out->epsilon = h->civd.model().epsilon();
  out->t = h->civd.model().exponent();
  out->beta = s.beta;
  out->delta_inv = s.delta_inv;
  out->type1_cells = s.type1_cells;
  out->type2_cells = s.type2_cells;
  out->box_nodes = s.box_nodes;
  out->record_events = s.record_events;
  out->empty_cover_fallbacks = s.empty_cover_fallbacks;
  out->wall_decompose_s = s.wall_decompose_s;
  out->wall_assign_s = s.wall_assign_s;
  return CIVD_OK;
}

civd_status civd_query(const civd_handle* h, const double* q, civd_site* out) {
  if (!h || !q || !out) return CIVD_ERR_INVALID_ARGUMENT;
  std::memset(out, 0, sizeof(*out));
  return guarded([&] {
    Point p = Point::from(
        std::span<const double>(q, static_cast<std::size_t>(h->civd.points().dim())));
    QueryResult r = h->civd.query(p);
    out->count = static_cast<int64_t>(r.site.size());
    out->ids = static_cast<int32_t*>(::operator new(sizeof(int32_t) * r.site.size()));
    std::memcpy(out->ids, r.site.data(), sizeof(int32_t) * r.site.size());
    out->magnitude = r.value.magnitude;
    out->has_direction = r.value.direction.has_value();
    if (r.value.direction)
      for (int i = 0; i < h->civd.points().dim(); ++i) out->direction[i] = (*r.value.direction)[i];
    out->outside = r.outside;
  });
}

void civd_site_free(civd_site* site) {
  if (!site) return;
  ::operator delete(site->ids);
  site->ids = nullptr;
  site->count = 0;
}

civd_status civd_validate(const civd_handle* h, int32_t samples, uint64_t seed, int32_t threads,
                          const char* report_path, civd_validation_summary* out) {
  if (!h || samples < 1) return CIVD_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto reports = validate_civd(h->civd, samples, seed, threads);
    int failures = 0;
    double min_ratio = 2.0;
    for (const auto& r : reports) {
      if (!r.pass) ++failures;
      min_ratio = std::min(min_ratio, r.ratio);
    }
    if (out) {
      out->samples = samples;
      out->failures = failures;
      out->min_ratio = min_ratio;
    }
    if (report_path) {
      nlohmann::json j;
      j["samples"] = samples;
      j["failures"] = failures;
      j["min_ratio"] = min_ratio;
      j["epsilon"] = h->civd.model().epsilon();
      j["threshold"] = 1.0 - h->civd.model().epsilon();
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : reports) {
        nlohmann::json row;
        std::vector<double> q(r.query.dim());
        for (int i = 0; i < r.query.dim(); ++i) q[i] = r.query[i];
        row["q"] = q;
        row["exact"] = r.exact;
        row["approx"] = r.approx;
        row["ratio"] = r.ratio;
        row["pass"] = r.pass;
        rows.push_back(std::move(row));
      }
      j["reports"] = std::move(rows);
      std::ofstream f(report_path, std::ios::binary);
      if (!f) fail(Errc::io_error, std::string("cannot write ") + report_path);
      f << j.dump();
    }
  });
}

civd_status civd_render_svg(const civd_handle* h, const char* path) {
  if (!h || !path) return CIVD_ERR_INVALID_ARGUMENT;
  return guarded([&] { render_svg_file(h->civd, path); });
}

const char* civd_last_error(void) { return g_last_error.c_str(); }

const char* civd_status_name(civd_status s) {
  switch (s) {
    case CIVD_OK: return "ok";
    case CIVD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CIVD_ERR_DIMENSION: return "dimension mismatch";
    case CIVD_ERR_DUPLICATE_POINTS: return "duplicate points";
    case CIVD_ERR_SINGULAR_QUERY: return "singular query";
    case CIVD_ERR_TOO_LARGE: return "too large";
    case CIVD_ERR_NO_SOLUTION: return "no solution";
    case CIVD_ERR_IO: return "io error";
    case CIVD_ERR_BAD_ARTIFACT: return "bad artifact";
    case CIVD_ERR_UNSUPPORTED_DIM: return "unsupported dimension";
    case CIVD_ERR_EMPTY_INPUT: return "empty input";
    case CIVD_ERR_MISSING_OBSERVER: return "missing observer";
    case CIVD_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

}  // extern "C"
