#include "qgraph/qgraph.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "qgraph/dtn.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/io.hpp"
#include "qgraph/lap_analysis.hpp"
#include "qgraph/resolvent.hpp"
#include "qgraph/spectrum.hpp"

struct qg_graph {
  qgraph::MetricGraph graph;
};

struct qg_function {
  qgraph::FunctionDescription desc;
};

namespace {

thread_local std::string g_error;
thread_local qg_complex g_error_lambda{0.0, 0.0};

qg_complex to_c(qgraph::cplx z) { return {z.real(), z.imag()}; }
qgraph::cplx from_c(qg_complex z) { return {z.re, z.im}; }

qg_status fail(qg_status s, const char* what) {
  g_error = what;
  return s;
}

/// Runs `body`, translating library exceptions into status codes.
template <class F>
qg_status guarded(F&& body) {
  g_error.clear();
  g_error_lambda = {0.0, 0.0};
  try {
    body();
    return QG_OK;
  } catch (const qgraph::ParseError& e) {
    return fail(QG_ERR_PARSE, e.what());
  } catch (const qgraph::InvariantViolation& e) {
    return fail(QG_ERR_INVARIANT, e.what());
  } catch (const qgraph::StructuralError& e) {
    return fail(QG_ERR_STRUCTURE, e.what());
  } catch (const qgraph::NearSingular& e) {
    g_error_lambda = to_c(e.lambda());
    return fail(QG_ERR_NEAR_SINGULAR, e.what());
  } catch (const qgraph::ContinuationPole& e) {
    g_error_lambda = to_c(e.lambda());
    return fail(QG_ERR_CONTINUATION_POLE, e.what());
  } catch (const qgraph::ThresholdExcluded& e) {
    g_error_lambda = to_c(e.lambda());
    return fail(QG_ERR_THRESHOLD, e.what());
  } catch (const qgraph::ExceptionalWindow& e) {
    return fail(QG_ERR_EXCEPTIONAL_WINDOW, e.what());
  } catch (const std::exception& e) {
    return fail(QG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QG_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
T* copy_out(const std::vector<T>& v) {
  if (v.empty()) return nullptr;
  auto* p = static_cast<T*>(std::malloc(v.size() * sizeof(T)));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, v.data(), v.size() * sizeof(T));
  return p;
}

char* copy_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

qg_status read_file(const char* path, std::string& out) {
  try {
    out = qgraph::read_text_file(path);
    return QG_OK;
  } catch (const std::exception& e) {
    return fail(QG_ERR_IO, e.what());
  }
}

qgraph::CompositeFunction bind(const qg_function* f, const qgraph::MetricGraph& g) {
  if (!f) {
    qgraph::CompositeFunction zero;
    zero.leads.components.assign(g.attachments().size(), qgraph::PiecewisePolynomial{});
    return zero;
  }
  return qgraph::bind_function(f->desc, g);
}

qgraph::ResolventOptions resolvent_options(const qg_resolvent_options* o) {
  qgraph::ResolventOptions r;
  if (!o) return r;
  r.formula = o->formula == QG_FORMULA_PRINTED ? qgraph::AFormula::Printed : qgraph::AFormula::Derived;
  if (o->res_tol > 0.0) r.res_tol = o->res_tol;
  if (o->lambda_floor > 0.0) r.lambda_floor = o->lambda_floor;
  return r;
}

qgraph::LapConfig lap_config(const qg_lap_options* o) {
  qgraph::LapConfig c;
  if (!o) return c;
  if (o->eps_ladder && o->eps_count > 0) c.eps_ladder.assign(o->eps_ladder, o->eps_ladder + o->eps_count);
  if (o->step > 0.0) c.step = o->step;
  if (o->exclusion_radius > 0.0) c.exclusion_radius = o->exclusion_radius;
  c.exclude = o->exclude != 0;
  if (o->scan_step > 0.0) c.scan_step = o->scan_step;
  if (o->accept_tol > 0.0) c.accept_tol = o->accept_tol;
  c.resolvent = resolvent_options(&o->resolvent);
  return c;
}

qg_exceptional_kind to_c(qgraph::ExceptionalKind k) {
  switch (k) {
    case qgraph::ExceptionalKind::InteriorEigenvalue: return QG_INTERIOR_EIGENVALUE;
    case qgraph::ExceptionalKind::ContinuationPole: return QG_CONTINUATION_POLE;
    case qgraph::ExceptionalKind::EmbeddedEigenvalueCandidate: return QG_EMBEDDED_CANDIDATE;
  }
  return QG_INTERIOR_EIGENVALUE;
}

}  // namespace

extern "C" {

const char* qg_last_error(void) { return g_error.c_str(); }
qg_complex qg_last_error_lambda(void) { return g_error_lambda; }

const char* qg_status_name(qg_status s) {
  switch (s) {
    case QG_OK: return "ok";
    case QG_ERR_PARSE: return "parse error";
    case QG_ERR_IO: return "io error";
    case QG_ERR_INVARIANT: return "invariant violation";
    case QG_ERR_STRUCTURE: return "structural error";
    case QG_ERR_NEAR_SINGULAR: return "near singular";
    case QG_ERR_CONTINUATION_POLE: return "continuation pole";
    case QG_ERR_THRESHOLD: return "threshold excluded";
    case QG_ERR_EXCEPTIONAL_WINDOW: return "exceptional window";
    case QG_ERR_ARGUMENT: return "invalid argument";
    case QG_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

void qg_free(void* p) { std::free(p); }

qg_status qg_parse_complex(const char* text, qg_complex* out) {
  if (!text || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = to_c(qgraph::parse_complex(text)); });
}

const char* qg_exceptional_kind_name(qg_exceptional_kind kind) {
  switch (kind) {
    case QG_INTERIOR_EIGENVALUE: return qgraph::to_string(qgraph::ExceptionalKind::InteriorEigenvalue);
    case QG_CONTINUATION_POLE: return qgraph::to_string(qgraph::ExceptionalKind::ContinuationPole);
    case QG_EMBEDDED_CANDIDATE: return qgraph::to_string(qgraph::ExceptionalKind::EmbeddedEigenvalueCandidate);
  }
  return "?";
}

// ---- graphs ----

qg_status qg_graph_parse(const char* text, qg_graph** out) {
  if (!text || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = new qg_graph{qgraph::parse_graph(text)}; });
}

qg_status qg_graph_load(const char* path, qg_graph** out) {
  if (!path || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  std::string text;
  if (qg_status s = read_file(path, text); s != QG_OK) return s;
  return qg_graph_parse(text.c_str(), out);
}

qg_status qg_graph_normalize(const qg_graph* g, double offset, qg_graph** out) {
  if (!g || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = new qg_graph{qgraph::normalize_boundary(g->graph, offset)}; });
}

qg_status qg_graph_serialize(const qg_graph* g, char** out) {
  if (!g || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = copy_string(qgraph::serialize_graph(g->graph)); });
}

qg_status qg_graph_info_get(const qg_graph* g, qg_graph_info* info) {
  if (!g || !info) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& G = g->graph;
    info->vertices = G.vertices().size();
    info->edges = G.edges().size();
    info->leads = G.leads().size();
    info->boundary = G.boundary_size();
    info->normalized = G.is_normalized() ? 1 : 0;
    info->min_edge_length = G.edges().empty() ? 0.0 : G.min_edge_length();
    info->max_edge_length = G.edges().empty() ? 0.0 : G.max_edge_length();
  });
}

qg_status qg_graph_boundary_ids(const qg_graph* g, int* ids) {
  if (!g || !ids) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& b = g->graph.boundary();
    for (std::size_t i = 0; i < b.size(); ++i) ids[i] = b[i];
  });
}

void qg_graph_free(qg_graph* g) { delete g; }

// ---- functions ----

qg_status qg_function_parse(const char* text, qg_function** out) {
  if (!text || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = new qg_function{qgraph::parse_function(text)}; });
}

qg_status qg_function_load(const char* path, qg_function** out) {
  if (!path || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  std::string text;
  if (qg_status s = read_file(path, text); s != QG_OK) return s;
  return qg_function_parse(text.c_str(), out);
}

qg_status qg_function_serialize(const qg_function* f, char** out) {
  if (!f || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = copy_string(qgraph::serialize_function(f->desc)); });
}

qg_status qg_function_check(const qg_graph* g, const qg_function* f) {
  if (!g || !f) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { bind(f, g->graph); });
}

void qg_function_free(qg_function* f) { delete f; }

// ---- DtN ----

qg_status qg_dtn(const qg_graph* g, qg_complex lambda, qg_complex* matrix, double* sigma_min) {
  if (!g || !matrix) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto d = qgraph::dtn_matrix(g->graph, from_c(lambda));
    const auto n = d.matrix.rows();
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) matrix[r * n + c] = to_c(d.matrix(r, c));
    if (sigma_min) *sigma_min = d.sigma_min;
  });
}

// ---- spectrum ----

qg_status qg_spectrum(const qg_graph* g, const qg_scan_options* opts, qg_eigenvalue** hits, size_t* count) {
  if (!g || !opts || !hits || !count) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!(opts->lambda_max > opts->lambda_min)) throw qgraph::StructuralError("scan window must satisfy min < max");
    auto cfg = qgraph::default_scan_config(g->graph, opts->lambda_min, opts->lambda_max);
    if (opts->step > 0.0) cfg.step = opts->step;
    if (opts->accept_tol > 0.0) cfg.accept_tol = opts->accept_tol;
    if (opts->merge_tol > 0.0) cfg.merge_tol = opts->merge_tol;
    std::vector<qg_eigenvalue> out;
    for (const auto& h : qgraph::find_eigenvalues(g->graph, cfg)) out.push_back({h.lambda, h.multiplicity, h.sigma_min});
    *count = out.size();
    *hits = copy_out(out);
  });
}

// ---- resolvent ----

void qg_resolvent_options_default(qg_resolvent_options* opts) {
  if (!opts) return;
  opts->formula = QG_FORMULA_DERIVED;
  opts->res_tol = qgraph::kResidualTol;
  opts->lambda_floor = qgraph::kLambdaFloor;
}

qg_status qg_resolvent(const qg_graph* g, const qg_function* f, qg_complex lambda, qg_sheet sheet,
                       const qg_resolvent_options* opts, qg_resolvent_sample* out, qg_complex* amplitude,
                       qg_complex* u1_at_zero) {
  if (!g || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto comp = bind(f, g->graph);
    const auto s = qgraph::evaluate_resolvent(
        g->graph, comp, from_c(lambda),
        sheet == QG_SHEET_CONTINUED ? qgraph::Sheet::Continued : qgraph::Sheet::Physical, resolvent_options(opts));
    out->lambda = to_c(s.lambda);
    out->k = to_c(s.k);
    out->value = to_c(s.value);
    out->robin_residual = s.robin_residual;
    out->trace_residual = s.trace_residual;
    out->vertex_residual = s.vertex_residual;
    out->scale = s.scale;
    out->valid = s.valid ? 1 : 0;
    for (Eigen::Index i = 0; i < s.A.size(); ++i) {
      if (amplitude) amplitude[i] = to_c(s.A(i));
      if (u1_at_zero) u1_at_zero[i] = to_c(s.u1_at_zero(i));
    }
  });
}

qg_status qg_robin_smin(const qg_graph* g, qg_complex lambda, double* out) {
  if (!g || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] { *out = qgraph::robin_matrix_smin(g->graph, from_c(lambda)); });
}

// ---- sweeps ----

void qg_lap_options_default(qg_lap_options* opts) {
  if (!opts) return;
  const qgraph::LapConfig c;
  opts->eps_ladder = nullptr;
  opts->eps_count = 0;
  opts->step = c.step;
  opts->exclusion_radius = c.exclusion_radius;
  opts->exclude = 0;
  opts->scan_step = 0.0;
  opts->accept_tol = c.accept_tol;
  qg_resolvent_options_default(&opts->resolvent);
}

qg_status qg_lap_sweep(const qg_graph* g, const qg_function* f, double lambda_min, double lambda_max,
                       const qg_lap_options* opts, qg_lap_cell** cells, size_t* count, double** offenders,
                       size_t* offender_count) {
  if (!g || !cells || !count) return fail(QG_ERR_ARGUMENT, "null argument");
  if (offenders) *offenders = nullptr;
  if (offender_count) *offender_count = 0;
  std::vector<double> off;
  const qg_status s = guarded([&] {
    try {
      const auto sweep = qgraph::lap_sweep(g->graph, bind(f, g->graph), lambda_min, lambda_max, lap_config(opts));
      std::vector<qg_lap_cell> out;
      out.reserve(sweep.cells.size());
      for (const auto& c : sweep.cells)
        out.push_back({c.lambda, c.eps, to_c(c.value), to_c(c.continued), c.deviation});
      *count = out.size();
      *cells = copy_out(out);
    } catch (const qgraph::ExceptionalWindow& e) {
      off = e.offenders();
      throw;
    }
  });
  if (s == QG_ERR_EXCEPTIONAL_WINDOW && offenders && offender_count) {
    *offender_count = off.size();
    *offenders = copy_out(off);
  }
  return s;
}

qg_status qg_exceptional_scan(const qg_graph* g, double lambda_min, double lambda_max, const qg_lap_options* opts,
                              qg_exceptional_point** points, size_t* count) {
  if (!g || !points || !count) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (!(lambda_max > lambda_min)) throw qgraph::StructuralError("scan window must satisfy min < max");
    const auto set = qgraph::exceptional_scan(g->graph, lambda_min, lambda_max, lap_config(opts));
    std::vector<qg_exceptional_point> out;
    for (const auto& p : set.points) out.push_back({p.lambda, to_c(p.kind), p.sigma_min, p.multiplicity});
    *count = out.size();
    *points = copy_out(out);
  });
}

qg_status qg_embedded_probe(const qg_graph* g, const qg_function* f, double lambda_star, const qg_lap_options* opts,
                            qg_probe_result* out) {
  if (!g || !out) return fail(QG_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto cfg = lap_config(opts);
    const auto r = qgraph::embedded_probe(g->graph, bind(f, g->graph), lambda_star, cfg.eps_ladder, cfg.resolvent);
    out->classification = r.classification == qgraph::ProbeClass::EmbeddedEigenvalue ? 1 : 0;
    out->pole_coefficient = r.pole_coefficient;
    out->background = r.background;
  });
}

}  // extern "C"
