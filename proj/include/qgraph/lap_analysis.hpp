#pragma once

#include <string>
#include <vector>

#include "qgraph/graph_model.hpp"
#include "qgraph/resolvent.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {

/// 1, 1e-1, ..., 1e-6
std::vector<double> default_eps_ladder();

enum class ExceptionalKind { InteriorEigenvalue, ContinuationPole, EmbeddedEigenvalueCandidate };

const char* to_string(ExceptionalKind kind);

struct ExceptionalPoint {
  double lambda = 0.0;
  ExceptionalKind kind = ExceptionalKind::InteriorEigenvalue;
  double sigma_min = 0.0;  // relative sigma_min of M, or sigma_min(k I + i Lambda) / max(1, k)
  int multiplicity = 0;
};

struct ExceptionalSet {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<ExceptionalPoint> points;  // ascending
};

struct LapConfig {
  std::vector<double> eps_ladder = default_eps_ladder();
  double step = 0.05;               // lambda grid spacing of the sweep
  double exclusion_radius = 1e-3;
  bool exclude = false;             // drop grid points near exceptional points instead of failing
  double scan_step = 0.0;           // 0: default_scan_config heuristic
  double accept_tol = 1e-8;
  double flux_tol = 1e-6;           // boundary flux below this (relative to max(1, k)) => embedded candidate
  double dip_tol = 1e-6;            // sigma_min(k + i Lambda) / max(1, k) below this => continuation pole
  ResolventOptions resolvent;
};

/// sigma(H0) hits in the window, each classified as interior eigenvalue or embedded
/// candidate, plus real-axis dips of sigma_min(k I + i Lambda).
ExceptionalSet exceptional_scan(const MetricGraph& g, double lambda_min, double lambda_max,
                                const LapConfig& cfg = {});

struct LapCell {
  double lambda = 0.0;
  double eps = 0.0;
  cplx value = 0.0;
  cplx continued = 0.0;
  double deviation = 0.0;
};

struct LapPointSummary {
  double lambda = 0.0;
  cplx continued = 0.0;
  double sup_abs = 0.0;
  double min_abs = 0.0;
  double variation = 0.0;      // sup_abs / min_abs over the ladder
  bool monotone = false;       // deviation decreasing for eps <= 1e-2, one roundoff step allowed
  double rate = 0.0;           // fitted slope of log deviation vs log eps (eps <= 1e-2)
  double final_deviation = 0.0;
};

struct LapSweep {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<double> eps_ladder;
  std::vector<LapCell> cells;  // grid-major, ladder order inside
  std::vector<LapPointSummary> points;
  ExceptionalSet exceptional;
};

/// (R(lambda + i eps) f, f) over a lambda grid and an eps ladder, with the continued
/// value F(lambda). Throws ExceptionalWindow if exceptional points fall in the window
/// and cfg.exclude is false.
LapSweep lap_sweep(const MetricGraph& g, const CompositeFunction& f, double lambda_min, double lambda_max,
                   const LapConfig& cfg = {});

enum class ProbeClass { Regular, EmbeddedEigenvalue };

const char* to_string(ProbeClass c);

struct ProbeResult {
  ProbeClass classification = ProbeClass::Regular;
  double pole_coefficient = 0.0;  // c in |value| ~ c / eps + b
  double background = 0.0;        // b
  std::vector<double> eps;
  std::vector<cplx> values;
};

/// Least-squares fit of |(R(lambda* + i eps) f, f)| against c / eps + b; a pole term
/// with c / eps_min > 10 |b| classifies lambda* as an embedded eigenvalue seen by f.
ProbeResult embedded_probe(const MetricGraph& g, const CompositeFunction& f, double lambda_star,
                           const std::vector<double>& eps_ladder = default_eps_ladder(),
                           const ResolventOptions& opts = {});

}  // namespace qgraph
