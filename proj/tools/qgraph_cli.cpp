// qgraph command line front-end. Talks to the library only through qgraph.h.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgraph/qgraph.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvariant = 2, kNumerical = 3 };

int log_level() {
  const char* v = std::getenv("QGRAPH_LOG");
  if (!v || !*v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void log(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[qgraph] " << msg << "\n";
}

int exit_code(qg_status s) {
  switch (s) {
    case QG_OK: return kOk;
    case QG_ERR_INVARIANT:
    case QG_ERR_STRUCTURE: return kInvariant;
    case QG_ERR_NEAR_SINGULAR:
    case QG_ERR_CONTINUATION_POLE:
    case QG_ERR_THRESHOLD:
    case QG_ERR_EXCEPTIONAL_WINDOW: return kNumerical;
    default: return kUsage;
  }
}

/// Error carrying a status, thrown out of command handlers.
struct Failure {
  qg_status status;
  std::string message;
};

void check(qg_status s) {
  if (s != QG_OK) throw Failure{s, qg_last_error()};
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14e", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string cnum(qg_complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14e%+.14ei", z.re == 0.0 ? 0.0 : z.re, z.im == 0.0 ? 0.0 : z.im);
  return buf;
}

struct Field {
  std::string name;
  std::string text;
  bool quoted = false;
};

Field F(const char* name, double x) { return {name, num(x), false}; }
Field F(const char* name, int x) { return {name, std::to_string(x), false}; }
Field F(const char* name, std::size_t x) { return {name, std::to_string(x), false}; }
Field C(const char* name, qg_complex z) { return {name, cnum(z), true}; }
Field S(const char* name, std::string s) { return {name, std::move(s), true}; }

/// Fixed-column table writer for csv or json-lines.
class Table {
public:
  Table(std::ostream& os, bool jsonl) : os_(os), jsonl_(jsonl) {}

  void row(const std::vector<Field>& fields) {
    if (jsonl_) {
      os_ << "{";
      for (std::size_t i = 0; i < fields.size(); ++i) {
        os_ << (i ? "," : "") << "\"" << fields[i].name << "\":";
        if (fields[i].quoted)
          os_ << "\"" << fields[i].text << "\"";
        else
          os_ << fields[i].text;
      }
      os_ << "}\n";
      return;
    }
    if (!header_) {
      for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << fields[i].name;
      os_ << "\n";
      header_ = true;
    }
    for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << fields[i].text;
    os_ << "\n";
  }

private:
  std::ostream& os_;
  bool jsonl_;
  bool header_ = false;
};

using GraphPtr = std::unique_ptr<qg_graph, decltype(&qg_graph_free)>;
using FunctionPtr = std::unique_ptr<qg_function, decltype(&qg_function_free)>;

struct Options {
  std::string command;
  std::string graph;
  std::string function;
  std::vector<std::string> lambdas;
  std::vector<double> window;
  double step = 0.0;
  std::vector<double> eps_ladder;
  std::string out;
  std::string format = "csv";
  std::string formula = "derived";
  std::string sheet = "physical";
  double offset = 1.0;
  double accept_tol = 0.0;
  double res_tol = 0.0;
  double exclusion_radius = 0.0;
  double scan_step = 0.0;
  double lambda_star = 0.0;
  bool exclude = false;
};

GraphPtr load_graph(const Options& o) {
  qg_graph* raw = nullptr;
  check(qg_graph_load(o.graph.c_str(), &raw));
  GraphPtr g(raw, qg_graph_free);
  qg_graph_info info{};
  check(qg_graph_info_get(g.get(), &info));
  if (info.normalized) return g;
  log(1, "normalizing boundary with offset " + num(o.offset));
  qg_graph* norm = nullptr;
  check(qg_graph_normalize(g.get(), o.offset, &norm));
  return GraphPtr(norm, qg_graph_free);
}

FunctionPtr load_function(const Options& o) {
  if (o.function.empty()) return FunctionPtr(nullptr, qg_function_free);
  qg_function* raw = nullptr;
  check(qg_function_load(o.function.c_str(), &raw));
  return FunctionPtr(raw, qg_function_free);
}

std::size_t boundary_size(const qg_graph* g) {
  qg_graph_info info{};
  check(qg_graph_info_get(g, &info));
  return info.boundary;
}

void require_window(const Options& o) {
  if (o.window.size() != 2) throw Failure{QG_ERR_ARGUMENT, "--window a,b is required"};
  if (!(o.window[1] > o.window[0])) throw Failure{QG_ERR_ARGUMENT, "--window needs a < b"};
}

/// Explicit --lambda values, else the real grid a, a+h, ..., b from --window/--step.
std::vector<qg_complex> lambda_points(const Options& o) {
  std::vector<qg_complex> pts;
  for (const auto& s : o.lambdas) {
    qg_complex z{};
    if (qg_parse_complex(s.c_str(), &z) != QG_OK)
      throw Failure{QG_ERR_ARGUMENT, "bad --lambda value '" + s + "'"};
    pts.push_back(z);
  }
  if (!pts.empty()) return pts;
  require_window(o);
  if (!(o.step > 0.0)) throw Failure{QG_ERR_ARGUMENT, "--step > 0 is required with --window"};
  const double a = o.window[0], b = o.window[1];
  const auto n = static_cast<long>(std::floor((b - a) / o.step + 1e-9));
  for (long i = 0; i <= n; ++i) pts.push_back({a + o.step * static_cast<double>(i), 0.0});
  return pts;
}

qg_resolvent_options resolvent_options(const Options& o) {
  qg_resolvent_options r;
  qg_resolvent_options_default(&r);
  r.formula = o.formula == "printed" ? QG_FORMULA_PRINTED : QG_FORMULA_DERIVED;
  if (o.res_tol > 0.0) r.res_tol = o.res_tol;
  return r;
}

qg_lap_options lap_options(const Options& o) {
  qg_lap_options l;
  qg_lap_options_default(&l);
  if (!o.eps_ladder.empty()) {
    l.eps_ladder = o.eps_ladder.data();
    l.eps_count = o.eps_ladder.size();
  }
  if (o.step > 0.0) l.step = o.step;
  if (o.exclusion_radius > 0.0) l.exclusion_radius = o.exclusion_radius;
  if (o.accept_tol > 0.0) l.accept_tol = o.accept_tol;
  if (o.scan_step > 0.0) l.scan_step = o.scan_step;
  l.exclude = o.exclude ? 1 : 0;
  l.resolvent = resolvent_options(o);
  return l;
}

// ---- commands ----

int cmd_validate(const Options& o, Table& t) {
  qg_graph* raw = nullptr;
  check(qg_graph_load(o.graph.c_str(), &raw));
  GraphPtr g(raw, qg_graph_free);
  qg_graph_info info{};
  check(qg_graph_info_get(g.get(), &info));
  GraphPtr norm = load_graph(o);
  qg_graph_info ninfo{};
  check(qg_graph_info_get(norm.get(), &ninfo));
  if (!o.function.empty()) check(qg_function_check(norm.get(), load_function(o).get()));
  t.row({F("vertices", info.vertices), F("edges", info.edges), F("leads", info.leads),
         F("boundary", ninfo.boundary), F("normalized", info.normalized), F("normalized_edges", ninfo.edges),
         S("status", "ok")});
  return kOk;
}

int cmd_spectrum(const Options& o, Table& t) {
  require_window(o);
  GraphPtr g = load_graph(o);
  qg_scan_options s{o.window[0], o.window[1], o.step, o.accept_tol, 0.0};
  qg_eigenvalue* hits = nullptr;
  std::size_t count = 0;
  check(qg_spectrum(g.get(), &s, &hits, &count));
  std::unique_ptr<qg_eigenvalue, decltype(&qg_free)> guard(hits, qg_free);
  log(1, "spectrum: " + std::to_string(count) + " eigenvalues");
  for (std::size_t i = 0; i < count; ++i)
    t.row({F("lambda", hits[i].lambda), F("multiplicity", hits[i].multiplicity), F("smin", hits[i].sigma_min)});
  return kOk;
}

int cmd_dtn(const Options& o, Table& t) {
  GraphPtr g = load_graph(o);
  const std::size_t n = boundary_size(g.get());
  std::vector<qg_complex> m(n * n);
  int rc = kOk;
  for (qg_complex lam : lambda_points(o)) {
    double smin = 0.0;
    const qg_status s = qg_dtn(g.get(), lam, m.data(), &smin);
    if (s != QG_OK) {
      std::cerr << "qgraph: dtn at " << cnum(lam) << ": " << qg_last_error() << "\n";
      if (exit_code(s) != kNumerical) throw Failure{s, qg_last_error()};
      rc = kNumerical;
      continue;
    }
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        t.row({C("lambda", lam), F("row", r), F("col", c), C("value", m[r * n + c]), F("smin", smin)});
  }
  return rc;
}

std::string join(const std::vector<qg_complex>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + cnum(v[i]);
  return s;
}

int cmd_resolvent(const Options& o, Table& t) {
  GraphPtr g = load_graph(o);
  FunctionPtr f = load_function(o);
  const std::size_t n = boundary_size(g.get());
  const qg_resolvent_options ropt = resolvent_options(o);
  const qg_sheet sheet = o.sheet == "continued" ? QG_SHEET_CONTINUED : QG_SHEET_PHYSICAL;
  std::vector<qg_complex> A(n), u1(n);
  int rc = kOk;
  for (qg_complex lam : lambda_points(o)) {
    qg_resolvent_sample s{};
    const qg_status st = qg_resolvent(g.get(), f.get(), lam, sheet, &ropt, &s, A.data(), u1.data());
    if (st != QG_OK) {
      std::cerr << "qgraph: resolvent at " << cnum(lam) << ": " << qg_last_error() << "\n";
      if (exit_code(st) != kNumerical) throw Failure{st, qg_last_error()};
      rc = kNumerical;
      continue;
    }
    t.row({C("lambda", s.lambda), C("k", s.k), C("value", s.value), F("robin_residual", s.robin_residual),
           F("trace_residual", s.trace_residual), F("vertex_residual", s.vertex_residual), F("scale", s.scale),
           F("valid", s.valid), S("A", join(A)), S("u1_0", join(u1))});
  }
  return rc;
}

int cmd_lap_sweep(const Options& o, Table& t) {
  require_window(o);
  GraphPtr g = load_graph(o);
  FunctionPtr f = load_function(o);
  const qg_lap_options l = lap_options(o);
  qg_lap_cell* cells = nullptr;
  std::size_t count = 0;
  double* off = nullptr;
  std::size_t noff = 0;
  const qg_status s = qg_lap_sweep(g.get(), f.get(), o.window[0], o.window[1], &l, &cells, &count, &off, &noff);
  std::unique_ptr<double, decltype(&qg_free)> off_guard(off, qg_free);
  if (s == QG_ERR_EXCEPTIONAL_WINDOW) {
    std::cerr << "qgraph: " << qg_last_error() << "\n";
    std::cerr << "offenders:";
    for (std::size_t i = 0; i < noff; ++i) std::cerr << " " << num(off[i]);
    std::cerr << "\n";
    return kNumerical;
  }
  check(s);
  std::unique_ptr<qg_lap_cell, decltype(&qg_free)> guard(cells, qg_free);
  for (std::size_t i = 0; i < count; ++i) {
    const qg_lap_cell& c = cells[i];
    t.row({F("lambda", c.lambda), F("eps", c.eps), F("re", c.value.re), F("im", c.value.im),
           F("abs", std::hypot(c.value.re, c.value.im)), F("continued_re", c.continued.re),
           F("continued_im", c.continued.im), F("deviation", c.deviation)});
  }
  return kOk;
}

int cmd_scan(const Options& o, Table& t) {
  require_window(o);
  GraphPtr g = load_graph(o);
  const qg_lap_options l = lap_options(o);
  qg_exceptional_point* pts = nullptr;
  std::size_t count = 0;
  check(qg_exceptional_scan(g.get(), o.window[0], o.window[1], &l, &pts, &count));
  std::unique_ptr<qg_exceptional_point, decltype(&qg_free)> guard(pts, qg_free);
  for (std::size_t i = 0; i < count; ++i)
    t.row({F("lambda_star", pts[i].lambda), S("kind", qg_exceptional_kind_name(pts[i].kind)),
           F("sigma_min", pts[i].sigma_min), F("multiplicity", pts[i].multiplicity)});
  return kOk;
}

int cmd_probe(const Options& o, Table& t) {
  GraphPtr g = load_graph(o);
  FunctionPtr f = load_function(o);
  const qg_lap_options l = lap_options(o);
  qg_probe_result r{};
  check(qg_embedded_probe(g.get(), f.get(), o.lambda_star, &l, &r));
  t.row({F("lambda_star", o.lambda_star), S("class", r.classification ? "EmbeddedEigenvalue" : "Regular"),
         F("pole_coefficient", r.pole_coefficient), F("background", r.background)});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum graph DtN maps, spectra and resolvent boundary values"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_function) {
    sub->add_option("--graph", o.graph, "graph description file")->required()->check(CLI::ExistingFile);
    auto* fn = sub->add_option("--function", o.function, "function description file")->check(CLI::ExistingFile);
    if (needs_function) fn->required();
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--offset", o.offset, "lead split offset used for normalization")->check(CLI::PositiveNumber);
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--lambda", o.lambdas, "spectral points, e.g. 2+1i,3.7")->delimiter(',');
    sub->add_option("--window", o.window, "real window a,b")->delimiter(',')->expected(2);
    sub->add_option("--step", o.step, "grid step")->check(CLI::PositiveNumber);
  };
  auto tolerances = [&](CLI::App* sub) {
    sub->add_option("--accept-tol", o.accept_tol, "eigenvalue acceptance tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--res-tol", o.res_tol, "residual tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--exclusion-radius", o.exclusion_radius, "radius around exceptional points")
        ->check(CLI::PositiveNumber);
    sub->add_option("--scan-step", o.scan_step, "exceptional scan step")->check(CLI::PositiveNumber);
    sub->add_option("--formula", o.formula, "lead amplitude formula")->check(CLI::IsMember({"derived", "printed"}));
  };

  auto* validate = app.add_subcommand("validate", "parse and check a graph (and function)");
  common(validate, false);

  auto* spectrum = app.add_subcommand("spectrum", "interior Dirichlet spectrum in a window");
  common(spectrum, false);
  grid(spectrum);
  spectrum->add_option("--accept-tol", o.accept_tol, "acceptance tolerance")->check(CLI::PositiveNumber);

  auto* dtn = app.add_subcommand("dtn", "Dirichlet-to-Neumann matrix entries");
  common(dtn, false);
  grid(dtn);

  auto* resolvent = app.add_subcommand("resolvent", "resolvent quadratic form samples");
  common(resolvent, true);
  grid(resolvent);
  tolerances(resolvent);
  resolvent->add_option("--sheet", o.sheet, "physical or continued")
      ->check(CLI::IsMember({"physical", "continued"}));

  auto* sweep = app.add_subcommand("lap-sweep", "eps -> 0 sweep of the resolvent form");
  common(sweep, true);
  grid(sweep);
  tolerances(sweep);
  sweep->add_option("--eps-ladder", o.eps_ladder, "eps values")->delimiter(',');
  sweep->add_flag("--exclude", o.exclude, "skip grid points near exceptional points");

  auto* scan = app.add_subcommand("scan", "exceptional points in a window");
  common(scan, false);
  grid(scan);
  tolerances(scan);

  auto* probe = app.add_subcommand("probe", "embedded eigenvalue probe at one point");
  common(probe, true);
  tolerances(probe);
  probe->add_option("--lambda-star", o.lambda_star, "real spectral point")->required();
  probe->add_option("--eps-ladder", o.eps_ladder, "eps values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  o.command = app.get_subcommands().front()->get_name();
  log(1, "command " + o.command);

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) {
      std::cerr << "qgraph: cannot open output '" << o.out << "'\n";
      return kUsage;
    }
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  Table table(os, o.format == "jsonl");

  try {
    if (o.command == "validate") return cmd_validate(o, table);
    if (o.command == "spectrum") return cmd_spectrum(o, table);
    if (o.command == "dtn") return cmd_dtn(o, table);
    if (o.command == "resolvent") return cmd_resolvent(o, table);
    if (o.command == "lap-sweep") return cmd_lap_sweep(o, table);
    if (o.command == "scan") return cmd_scan(o, table);
    if (o.command == "probe") return cmd_probe(o, table);
  } catch (const Failure& f) {
    std::cerr << "qgraph: " << qg_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  }
  return kUsage;
}
