// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "../support/test_graphs.hpp"
#include "qgraph/dtn.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/lap_analysis.hpp"
#include "qgraph/resolvent.hpp"
#include "qgraph/spectrum.hpp"

using namespace fixtures;
using qgraph::CVector;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("criterion %2d: %s  %s (%s)\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

/// Real lambda in [lo, hi] with smin_profile above `gap` (away from sigma(H0)).
double regular_real(const MetricGraph& g, std::mt19937& rng, double lo, double hi, double gap = 1e-4) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (;;) {
    const double lam = u(rng);
    if (qgraph::smin_profile(g, lam) > gap) return lam;
  }
}

// ---- 1 ----
Outcome interval_dtn() {
  std::mt19937 rng(1);
  double worst = 0.0;
  int count = 0;
  for (double l : {1.0, kPi, 2.5}) {
    const MetricGraph g = interval_lead(l);
    std::uniform_real_distribution<double> re(-5.0, 30.0), im(-3.0, 3.0), pos(0.1, 30.0);
    for (int i = 0; i < 40; ++i) {
      cplx lam;
      cplx ref;
      for (;;) {
        lam = i < 20 ? cplx(pos(rng), 0.0) : cplx(re(rng), im(rng));
        if (std::abs(lam.imag()) < 0.05 && i >= 20) continue;
        // keep away from poles and zeros of the closed form
        const cplx k = std::sqrt(lam);
        if (std::abs(std::sin(k * l)) < 0.05 || std::abs(std::cos(k * l)) < 0.05) continue;
        ref = oracle::interval_dtn(lam, l);
        break;
      }
      const cplx got = qgraph::dtn_matrix(g, lam).matrix(0, 0);
      worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
      ++count;
    }
  }
  return {worst <= 1e-9, fmt("%.0f samples, max rel err %.2e", count, worst)};
}

// ---- 2 ----
Outcome hermiticity() {
  std::mt19937 rng(2);
  const std::vector<NamedGraph> graphs = {
      {"interval", interval_lead(kPi)}, {"three_star", three_star()}, {"lasso", lasso(1.0)}, {"random5", random5()}};
  double worst = 0.0;
  int count = 0;
  for (const auto& [name, g] : graphs) {
    for (int i = 0; i < 50; ++i) {
      const double lam = regular_real(g, rng, 0.05, 30.0);
      const CMatrix L = qgraph::dtn_matrix(g, lam).matrix;
      const double defect = (L - L.adjoint()).norm() / std::max(1.0, L.norm());
      worst = std::max(worst, defect);
      ++count;
    }
  }
  return {worst <= 1e-9, fmt("%.0f samples, max relative defect %.2e", count, worst)};
}

// ---- 3 ----
Outcome extension_route() {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int count = 0;
  for (const auto& [name, g] : corpus()) {
    for (int i = 0; i < 20; ++i) {
      const cplx lam =
          i % 2 ? cplx(regular_real(g, rng, 0.05, 25.0), 0.0) : cplx(25.0 * (u(rng) + 1.0) / 2.0, 3.0 * u(rng));
      CVector phi(static_cast<Eigen::Index>(g.boundary_size()));
      for (auto& p : phi) p = cplx(u(rng), u(rng));
      const CVector direct = qgraph::dtn_matrix(g, lam).matrix * phi;
      const CVector ext = qgraph::dtn_via_extension(g, lam, phi);
      worst = std::max(worst, (direct - ext).norm() / std::max(1.0, direct.norm()));
      ++count;
    }
  }
  return {worst <= 1e-8, fmt("%.0f samples on 7 graphs, max err %.2e", count, worst)};
}

// ---- 4 ----
Outcome spectrum_oracle() {
  double worst = 0.0;
  bool mult_ok = true, count_ok = true;
  struct Case {
    double l, lo, hi;
  };
  for (const Case c : {Case{kPi, 0.5, 17.0}, Case{1.0, 1.0, 95.0}}) {
    const MetricGraph g = interval_lead(c.l);
    const auto hits = qgraph::find_eigenvalues(g, qgraph::default_scan_config(g, c.lo, c.hi));
    const auto ref = oracle::interval_spectrum(c.l, c.lo, c.hi);
    if (hits.size() != ref.size()) {
      count_ok = false;
      continue;
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
      worst = std::max(worst, std::abs(hits[i].lambda - ref[i]));
      mult_ok = mult_ok && hits[i].multiplicity == 1;
    }
  }
  std::string d = fmt("max abs err %.2e", worst);
  if (!count_ok) d += ", wrong number of eigenvalues";
  if (!mult_ok) d += ", wrong multiplicity";
  return {count_ok && mult_ok && worst <= 1e-8, d};
}

/// Bump on lead 1 of the full line, unfolded onto t = -x.
std::vector<oracle::LinePiece> unfolded_bump(const qgraph::PiecewisePolynomial& b) {
  const auto& p = b.pieces().front();
  return {{-p.x1, -p.x0, [b](double t) { return b(-t); }}};
}

// ---- 5 ----
Outcome whole_line() {
  const MetricGraph g = full_line(2.0);
  qgraph::CompositeFunction f = zero_function(g);
  f.leads.components[0] = bump(1.0, 1.0);
  const auto line = unfolded_bump(f.leads.components[0]);
  double worst = 0.0;
  int count = 0;
  const std::array<double, 3> ims = {1.0, 0.1, 0.01};
  for (int i = 0; i < 20; ++i) {
    const cplx lam(0.5 + 19.5 * i / 19.0, ims[static_cast<std::size_t>(i) % 3]);
    const cplx got = qgraph::solve_full(g, f, lam).value;
    cplx k = std::sqrt(lam);
    const cplx ref = oracle::whole_line_form(line, k);
    worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
    ++count;
  }
  for (int i = 0; i < 10; ++i) {
    const double lam = 0.7 + 1.9 * i;
    const cplx got = qgraph::continue_value(g, f, lam).value;
    const cplx ref = oracle::whole_line_form(line, std::sqrt(lam));
    worst = std::max(worst, std::abs(got - ref) / std::abs(ref));
    ++count;
  }
  return {worst <= 1e-8, fmt("%.0f points, max rel err %.2e", count, worst)};
}

/// Corpus of resolvent samples: 30 upper half-plane points per graph plus 10 continued real points.
struct CorpusStats {
  int samples = 0;
  int upper = 0;
  int invalid = 0;
  double worst_ratio = 0.0;  // max residual / scale
  int herglotz_violations = 0;
  double min_rel_imag = 1e300;
};

CorpusStats resolvent_corpus() {
  CorpusStats s;
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> re(0.2, 25.0), im(0.01, 2.0);
  for (const auto& [name, g] : corpus()) {
    const auto f = corpus_function(g);
    std::vector<qgraph::ResolventSample> samples;
    for (int i = 0; i < 30; ++i) samples.push_back(qgraph::solve_full(g, f, cplx(re(rng), im(rng))));
    for (int i = 0; i < 10; ++i) samples.push_back(qgraph::continue_value(g, f, regular_real(g, rng, 0.2, 25.0)));
    for (const auto& r : samples) {
      ++s.samples;
      if (!r.valid) ++s.invalid;
      const double worst = std::max({r.robin_residual, r.trace_residual, r.vertex_residual}) / r.scale;
      s.worst_ratio = std::max(s.worst_ratio, worst);
      if (r.lambda.imag() > 0.0) {
        ++s.upper;
        if (!(r.value.imag() > 0.0)) ++s.herglotz_violations;
        s.min_rel_imag = std::min(s.min_rel_imag, r.value.imag() / std::abs(r.value));
      }
    }
  }
  return s;
}

// ---- 6 ----
Outcome residual_gate(const CorpusStats& s) {
  const MetricGraph g = asym2();
  const auto f = corpus_function(g);
  qgraph::ResolventOptions printed;
  printed.formula = qgraph::AFormula::Printed;
  double printed_worst = 0.0, derived_worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const cplx lam(0.5 + 2.0 * i, 0.5);
    const auto p = qgraph::solve_full(g, f, lam, printed);
    const auto d = qgraph::solve_full(g, f, lam);
    printed_worst = std::max(printed_worst, p.robin_residual / p.scale);
    derived_worst = std::max(derived_worst, d.robin_residual / d.scale);
  }
  const bool ok = s.invalid == 0 && s.worst_ratio <= 1e-8 && derived_worst <= 1e-8 && printed_worst > 1e-3;
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%d corpus samples, max residual/scale %.2e; asym2 derived %.2e, printed %.2e", s.samples,
                s.worst_ratio, derived_worst, printed_worst);
  return {ok, buf};
}

// ---- 7 ----
Outcome herglotz(const CorpusStats& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d samples with Im lambda > 0, %d violations, min Im/|value| %.2e", s.upper,
                s.herglotz_violations, s.min_rel_imag);
  return {s.upper >= 200 && s.herglotz_violations == 0, buf};
}

// ---- 8 ----
Outcome lap_bounded() {
  struct Case {
    const char* name;
    MetricGraph g;
    qgraph::CompositeFunction f;
    double a, b;
  };
  std::vector<Case> cases;
  {
    MetricGraph g = interval_lead(kPi);
    auto f = zero_function(g);
    f.interior[1] = bump(0.5, 2.0);
    f.leads.components[0] = bump(0.5, 1.0);
    cases.push_back({"interval+lead", g, f, 1.5, 3.5});
  }
  {
    MetricGraph g = lasso(1.0);
    auto f = zero_function(g);
    f.interior[1] = bump(0.5, 2.0);
    f.leads.components[0] = bump(1.0, 1.0);
    cases.push_back({"lasso", g, f, 1.5, 3.5});
  }
  qgraph::LapConfig cfg;
  cfg.step = 0.1;
  bool ok = true;
  double worst_var = 0.0, worst_final = 0.0;
  int non_monotone = 0, points = 0;
  for (const auto& c : cases) {
    const auto sweep = qgraph::lap_sweep(c.g, c.f, c.a, c.b, cfg);
    for (const auto& p : sweep.points) {
      ++points;
      worst_var = std::max(worst_var, p.variation);
      worst_final = std::max(worst_final, p.final_deviation / std::abs(p.continued));
      if (!p.monotone) ++non_monotone;
      ok = ok && std::isfinite(p.sup_abs) && p.variation < 10.0 && p.monotone &&
           p.final_deviation <= 1e-4 * std::abs(p.continued);
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d grid points, max variation %.2f, non-monotone %d, max dev(1e-6)/|F| %.2e",
                points, worst_var, non_monotone, worst_final);
  return {ok && points > 0, buf};
}

// ---- 9 ----
Outcome real_axis_invertibility() {
  std::mt19937 rng(9);
  double worst = 1e300;
  int count = 0;
  for (const auto& [name, g] : corpus()) {
    for (int i = 0; i < 100; ++i) {
      const double lam = regular_real(g, rng, 0.05, 30.0);
      worst = std::min(worst, qgraph::robin_matrix_smin(g, lam));
      ++count;
    }
  }
  return {worst > 1e-6, fmt("%.0f samples on 7 graphs, min sigma_min %.3e", count, worst)};
}

// ---- 10 ----
Outcome embedded() {
  const MetricGraph g = lasso(1.0);
  auto loop_f = zero_function(g);
  loop_f.interior[1] = bump(0.5, 2.0);
  auto lead_f = zero_function(g);
  lead_f.leads.components[0] = bump(1.0, 1.0);
  const auto a = qgraph::embedded_probe(g, loop_f, 1.0);
  const auto b = qgraph::embedded_probe(g, lead_f, 1.0);
  const double eps_min = 1e-6;
  char buf[220];
  std::snprintf(buf, sizeof buf, "loop f: %s, c/eps_min = %.3e, b = %.3e; lead f: %s, c/eps_min = %.3e, b = %.3e",
                qgraph::to_string(a.classification), a.pole_coefficient / eps_min, a.background,
                qgraph::to_string(b.classification), b.pole_coefficient / eps_min, b.background);
  return {a.classification == qgraph::ProbeClass::EmbeddedEigenvalue &&
              b.classification == qgraph::ProbeClass::Regular,
          buf};
}

// ---- 11 ----
std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  if (!p) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  status = pclose(p);
  return out;
}

Outcome determinism() {
  const std::string q = QGRAPH_CLI_PATH;
  const std::string s = std::string(QGRAPH_SAMPLES_DIR) + "/";
  const std::vector<std::string> runs = {
      // 1-3: DtN matrices
      "dtn --graph " + s + "interval_lead.qg --lambda 2,1+1i,7.5-0.5i",
      "dtn --graph " + s + "three_star.qg --window 0.5,6 --step 0.25",
      "dtn --graph " + s + "random5.qg --window 0.5,6 --step 0.25 --format jsonl",
      // 4
      "spectrum --graph " + s + "interval_lead.qg --window 0.5,17",
      // 5-7
      "resolvent --graph " + s + "full_line.qg --function " + s + "bump_lead.fn --lambda 2+1i,3+0.1i,5+0.01i",
      "resolvent --graph " + s + "full_line.qg --function " + s + "bump_lead.fn --lambda 3.7 --sheet continued",
      "resolvent --graph " + s + "asym2.qg --function " + s + "asym2.fn --lambda 2+0.5i --formula printed",
      // 8
      "lap-sweep --graph " + s + "interval_lead.qg --function " + s + "interval_mixed.fn --window 1.5,3.5 --step 0.5",
      // 9
      "scan --graph " + s + "lasso.qg --window 0.5,5",
      // 10
      "probe --graph " + s + "lasso.qg --function " + s + "loop_bump.fn --lambda-star 1",
  };
  int differing = 0, failed = 0;
  for (const auto& r : runs) {
    int st1 = 0, st2 = 0;
    const std::string a = run_capture(q + " " + r, st1);
    const std::string b = run_capture(q + " " + r, st2);
    if (st1 != 0 || st2 != 0 || a.empty()) ++failed;
    if (a != b) ++differing;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu CLI invocations run twice, %d differ, %d failed", runs.size(), differing,
                failed);
  return {differing == 0 && failed == 0, buf};
}

template <class F>
Outcome guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  report(1, "interval DtN equals k cot(k l)", guarded(interval_dtn));
  report(2, "DtN Hermitian at real regular lambda", guarded(hermiticity));
  report(3, "extension route equals direct DtN", guarded(extension_route));
  report(4, "interval Dirichlet spectrum recovered", guarded(spectrum_oracle));
  report(5, "full-line form equals whole-line kernel", guarded(whole_line));
  CorpusStats stats;
  try {
    stats = resolvent_corpus();
  } catch (const std::exception& e) {
    stats.invalid = -1;
    std::printf("resolvent corpus failed: %s\n", e.what());
  }
  report(6, "residual gate, printed amplitude fails it", guarded([&] { return residual_gate(stats); }));
  report(7, "Herglotz sign in the upper half-plane", guarded([&] { return herglotz(stats); }));
  report(8, "bounded eps ladders converging to F", guarded(lap_bounded));
  report(9, "k + i Lambda invertible on the real axis", guarded(real_axis_invertibility));
  report(10, "embedded eigenvalue probe on the lasso", guarded(embedded));
  report(11, "CLI output byte-identical across runs", guarded(determinism));
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
