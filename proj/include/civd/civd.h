/* C interface to the CIVD library: opaque handles, status codes, no C++
 * types across the boundary. The CLI is built entirely on this surface. */
#ifndef CIVD_CIVD_H
#define CIVD_CIVD_H

#include <stdint.h>
#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CIVD_API __declspec(dllexport)
#else
#define CIVD_API __attribute__((visibility("default")))
#endif

typedef struct civd_handle civd_handle;

typedef enum civd_status {
  CIVD_OK = 0,
  CIVD_ERR_INVALID_ARGUMENT = 1,
  CIVD_ERR_DIMENSION = 2,
  CIVD_ERR_DUPLICATE_POINTS = 3,
  CIVD_ERR_SINGULAR_QUERY = 4,
  CIVD_ERR_TOO_LARGE = 5,
  CIVD_ERR_NO_SOLUTION = 6,
  CIVD_ERR_IO = 7,
  CIVD_ERR_BAD_ARTIFACT = 8,
  CIVD_ERR_UNSUPPORTED_DIM = 9,
  CIVD_ERR_EMPTY_INPUT = 10,
  CIVD_ERR_MISSING_OBSERVER = 11,
  CIVD_ERR_INTERNAL = 12
} civd_status;

typedef enum civd_model { CIVD_MODEL_VECTOR = 0, CIVD_MODEL_DENSITY = 1 } civd_model;

typedef struct civd_build_options {
  civd_model model;
  double t;             /* vector exponent, >= 1 */
  double epsilon;       /* target error in (0, 1) */
  double beta_override; /* <= 0: derive beta from epsilon */
  int32_t threads;      /* <= 0: hardware, capped by CIVD_THREADS */
} civd_build_options;

typedef struct civd_build_stats {
  int64_t n;
  int32_t dim;
  int32_t model; /* civd_model */
  double epsilon;
  double t;
  double beta;
  double delta_inv;
  int64_t type1_cells;
  int64_t type2_cells;
  int64_t box_nodes;
  int64_t record_events;
  int64_t empty_cover_fallbacks;
  double wall_decompose_s;
  double wall_assign_s;
} civd_build_stats;

typedef struct civd_site {
  int32_t* ids;      /* input point indices; free with civd_site_free */
  int64_t count;
  double magnitude;
  double direction[8]; /* unit vector when has_direction */
  int32_t has_direction;
  int32_t outside;     /* query fell outside the root box */
} civd_site;

typedef struct civd_validation_summary {
  int32_t samples;
  int32_t failures;
  double min_ratio;
} civd_validation_summary;

/* coords: n*dim doubles, row major. */
CIVD_API civd_status civd_build(const double* coords, int32_t n, int32_t dim,
                                const civd_build_options* options, civd_handle** out);
/* Reads CSV (one point per line) or JSON ({"dim": d, "points": [[..], ..]}). */
CIVD_API civd_status civd_build_from_file(const char* input_path,
                                          const civd_build_options* options, civd_handle** out);
CIVD_API civd_status civd_load(const char* path, civd_handle** out);
CIVD_API civd_status civd_save(const civd_handle* h, const char* path);
CIVD_API void civd_destroy(civd_handle* h);

CIVD_API civd_status civd_stats(const civd_handle* h, civd_build_stats* out);
CIVD_API civd_status civd_query(const civd_handle* h, const double* q, civd_site* out);
CIVD_API void civd_site_free(civd_site* site);

/* Writes a JSON report to report_path when non-NULL. */
CIVD_API civd_status civd_validate(const civd_handle* h, int32_t samples, uint64_t seed,
                                   int32_t threads, const char* report_path,
                                   civd_validation_summary* out);
CIVD_API civd_status civd_render_svg(const civd_handle* h, const char* path);

/* Message for the most recent failure on this thread. */
CIVD_API const char* civd_last_error(void);
CIVD_API const char* civd_status_name(civd_status s);

/* Default options: density model, epsilon 0.2, derived beta. */
CIVD_API void civd_default_options(civd_build_options* out);

#ifdef __cplusplus
}
#endif

#endif /* CIVD_CIVD_H */
