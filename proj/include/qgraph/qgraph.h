/* C interface to the quantum graph library. All objects are opaque handles; every
 * call returns a qg_status and leaves a message in qg_last_error() on failure. */
#ifndef QGRAPH_QGRAPH_H
#define QGRAPH_QGRAPH_H

#include <stddef.h>

#if defined(_WIN32)
#define QG_API __declspec(dllexport)
#else
#define QG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qg_graph qg_graph;
typedef struct qg_function qg_function;

typedef struct {
  double re;
  double im;
} qg_complex;

typedef enum {
  QG_OK = 0,
  QG_ERR_PARSE = 1,             /* syntax error in a graph or function document */
  QG_ERR_IO = 2,                /* file could not be read */
  QG_ERR_INVARIANT = 3,         /* admissibility rule violated (rank, hermiticity, ...) */
  QG_ERR_STRUCTURE = 4,         /* inconsistent ids, shapes, out-of-range arguments */
  QG_ERR_NEAR_SINGULAR = 5,     /* lambda on the interior spectrum */
  QG_ERR_CONTINUATION_POLE = 6, /* k + i Lambda singular */
  QG_ERR_THRESHOLD = 7,         /* lambda on the cut or inside the threshold floor */
  QG_ERR_EXCEPTIONAL_WINDOW = 8,/* sweep window contains exceptional points */
  QG_ERR_ARGUMENT = 9,          /* null pointer or invalid option */
  QG_ERR_INTERNAL = 10
} qg_status;

typedef enum { QG_FORMULA_DERIVED = 0, QG_FORMULA_PRINTED = 1 } qg_formula;
typedef enum { QG_SHEET_PHYSICAL = 0, QG_SHEET_CONTINUED = 1 } qg_sheet;

typedef enum {
  QG_INTERIOR_EIGENVALUE = 0,
  QG_CONTINUATION_POLE = 1,
  QG_EMBEDDED_CANDIDATE = 2
} qg_exceptional_kind;

/* Message of the last failed call on this thread ("" if none). */
QG_API const char* qg_last_error(void);
/* lambda attached to the last numerical error, when there is one. */
QG_API qg_complex qg_last_error_lambda(void);
QG_API const char* qg_status_name(qg_status s);

/* Parses "re+imi", "re", "imi" (same syntax as the graph documents). */
QG_API qg_status qg_parse_complex(const char* text, qg_complex* out);

/* Releases arrays and strings returned by the library. */
QG_API void qg_free(void* p);

/* ---- graphs ---- */

typedef struct {
  size_t vertices;
  size_t edges;
  size_t leads;
  size_t boundary;   /* number of boundary vertices (leads after normalization) */
  int normalized;
  double min_edge_length;
  double max_edge_length;
} qg_graph_info;

QG_API qg_status qg_graph_parse(const char* text, qg_graph** out);
QG_API qg_status qg_graph_load(const char* path, qg_graph** out);
/* Splits leads at distance `offset` so every boundary vertex is in normal form. */
QG_API qg_status qg_graph_normalize(const qg_graph* g, double offset, qg_graph** out);
QG_API qg_status qg_graph_serialize(const qg_graph* g, char** out);
QG_API qg_status qg_graph_info_get(const qg_graph* g, qg_graph_info* info);
/* Boundary vertex ids in boundary-index order; `ids` must hold info.boundary entries. */
QG_API qg_status qg_graph_boundary_ids(const qg_graph* g, int* ids);
QG_API void qg_graph_free(qg_graph* g);

/* ---- functions f = (f0 on edges, f1 on leads) ---- */

QG_API qg_status qg_function_parse(const char* text, qg_function** out);
QG_API qg_status qg_function_load(const char* path, qg_function** out);
QG_API qg_status qg_function_serialize(const qg_function* f, char** out);
/* Checks that `f` refers only to edges and leads of `g` and fits their domains. */
QG_API qg_status qg_function_check(const qg_graph* g, const qg_function* f);
QG_API void qg_function_free(qg_function* f);

/* ---- DtN map ---- */

/* Lambda(lambda) in row-major order (n*n entries, n = boundary size). Requires a
 * normalized graph. sigma_min (may be NULL) receives the relative sigma_min of the
 * interior system. */
QG_API qg_status qg_dtn(const qg_graph* g, qg_complex lambda, qg_complex* matrix, double* sigma_min);

/* ---- interior spectrum ---- */

typedef struct {
  double lambda_min;
  double lambda_max;
  double step;        /* <= 0: default heuristic */
  double accept_tol;  /* <= 0: default */
  double merge_tol;   /* <= 0: default */
} qg_scan_options;

typedef struct {
  double lambda;
  int multiplicity;
  double sigma_min;
} qg_eigenvalue;

QG_API qg_status qg_spectrum(const qg_graph* g, const qg_scan_options* opts, qg_eigenvalue** hits,
                             size_t* count);

/* ---- resolvent ---- */

typedef struct {
  qg_formula formula;
  double res_tol;       /* <= 0: default */
  double lambda_floor;  /* <= 0: default */
} qg_resolvent_options;

typedef struct {
  qg_complex lambda;
  qg_complex k;
  qg_complex value;  /* (R(lambda) f, f) */
  double robin_residual;
  double trace_residual;
  double vertex_residual;
  double scale;
  int valid;
} qg_resolvent_sample;

QG_API void qg_resolvent_options_default(qg_resolvent_options* opts);

/* `f` may be NULL (zero function). `amplitude` and `u1_at_zero` may be NULL or hold
 * n entries each. */
QG_API qg_status qg_resolvent(const qg_graph* g, const qg_function* f, qg_complex lambda, qg_sheet sheet,
                              const qg_resolvent_options* opts, qg_resolvent_sample* out, qg_complex* amplitude,
                              qg_complex* u1_at_zero);

/* sigma_min(k I + i Lambda(lambda)), principal k. */
QG_API qg_status qg_robin_smin(const qg_graph* g, qg_complex lambda, double* out);

/* ---- limiting absorption sweeps ---- */

typedef struct {
  const double* eps_ladder;  /* NULL: 1, 1e-1, ..., 1e-6 */
  size_t eps_count;
  double step;               /* <= 0: default */
  double exclusion_radius;   /* <= 0: default */
  int exclude;
  double scan_step;          /* <= 0: heuristic */
  double accept_tol;         /* <= 0: default */
  qg_resolvent_options resolvent;
} qg_lap_options;

typedef struct {
  double lambda;
  double eps;
  qg_complex value;
  qg_complex continued;
  double deviation;
} qg_lap_cell;

typedef struct {
  double lambda;
  qg_exceptional_kind kind;
  double sigma_min;
  int multiplicity;
} qg_exceptional_point;

typedef struct {
  int classification;  /* 0 regular, 1 embedded eigenvalue */
  double pole_coefficient;
  double background;
} qg_probe_result;

QG_API void qg_lap_options_default(qg_lap_options* opts);

/* On QG_ERR_EXCEPTIONAL_WINDOW the offending lambdas are returned through
 * `offenders` / `offender_count` when those are non-NULL (release with qg_free). */
QG_API qg_status qg_lap_sweep(const qg_graph* g, const qg_function* f, double lambda_min, double lambda_max,
                              const qg_lap_options* opts, qg_lap_cell** cells, size_t* count, double** offenders,
                              size_t* offender_count);

QG_API qg_status qg_exceptional_scan(const qg_graph* g, double lambda_min, double lambda_max,
                                     const qg_lap_options* opts, qg_exceptional_point** points, size_t* count);

QG_API qg_status qg_embedded_probe(const qg_graph* g, const qg_function* f, double lambda_star,
                                   const qg_lap_options* opts, qg_probe_result* out);

QG_API const char* qg_exceptional_kind_name(qg_exceptional_kind kind);

#ifdef __cplusplus
}
#endif

#endif
