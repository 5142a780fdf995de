#include "qgraph/lap_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qgraph/errors.hpp"

namespace qgraph {

std::vector<double> default_eps_ladder() { return {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

const char* to_string(ExceptionalKind kind) {
  switch (kind) {
    case ExceptionalKind::InteriorEigenvalue: return "InteriorEigenvalue";
    case ExceptionalKind::ContinuationPole: return "ContinuationPole";
    case ExceptionalKind::EmbeddedEigenvalueCandidate: return "EmbeddedEigenvalueCandidate";
  }
  return "?";
}

const char* to_string(ProbeClass c) {
  return c == ProbeClass::EmbeddedEigenvalue ? "EmbeddedEigenvalue" : "Regular";
}

namespace {

std::vector<double> uniform_grid(double a, double b, double step) {
  const auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / step - 1e-9)));
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) grid[static_cast<std::size_t>(i)] = i == n ? b : a + (b - a) * i / n;
  return grid;
}

bool near_any(double x, const std::vector<ExceptionalPoint>& pts, double radius) {
  return std::any_of(pts.begin(), pts.end(), [&](const auto& p) { return std::abs(p.lambda - x) < radius; });
}

}  // namespace

ExceptionalSet exceptional_scan(const MetricGraph& g, double lambda_min, double lambda_max, const LapConfig& cfg) {
  if (!(lambda_min >= cfg.resolvent.lambda_floor))
    throw StructuralError("exceptional scan window must lie above the threshold floor");
  ScanConfig sc = default_scan_config(g, lambda_min, lambda_max);
  if (cfg.scan_step > 0.0) sc.step = cfg.scan_step;
  sc.accept_tol = cfg.accept_tol;

  ExceptionalSet out;
  out.lambda_min = lambda_min;
  out.lambda_max = lambda_max;
  for (const EigenvalueHit& h : find_eigenvalues(g, sc)) {
    const double k = std::sqrt(h.lambda);
    const double flux = boundary_flux_defect(g, h.lambda, h.multiplicity);
    const auto kind = flux < cfg.flux_tol * std::max(1.0, k) ? ExceptionalKind::EmbeddedEigenvalueCandidate
                                                              : ExceptionalKind::InteriorEigenvalue;
    out.points.push_back(ExceptionalPoint{h.lambda, kind, h.sigma_min, h.multiplicity});
  }

  // Real-axis dips of sigma_min(k I + i Lambda); grid points at sigma(H0) are skipped.
  const std::vector<double> grid = uniform_grid(lambda_min, lambda_max, sc.step);
  std::vector<double> prof(grid.size(), -1.0);
  const std::vector<ExceptionalPoint> eig = out.points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (near_any(grid[i], eig, cfg.exclusion_radius)) continue;
    try {
      prof[i] = robin_matrix_smin(g, grid[i]) / std::max(1.0, std::sqrt(grid[i]));
    } catch (const NearSingular&) {
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (prof[i] < 0.0 || !(prof[i] < cfg.dip_tol)) continue;
    const bool left = i == 0 || prof[i - 1] < 0.0 || prof[i] <= prof[i - 1];
    const bool right = i + 1 == grid.size() || prof[i + 1] < 0.0 || prof[i] < prof[i + 1];
    if (left && right) out.points.push_back(ExceptionalPoint{grid[i], ExceptionalKind::ContinuationPole, prof[i], 1});
  }
  std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return out;
}

LapSweep lap_sweep(const MetricGraph& g, const CompositeFunction& f, double lambda_min, double lambda_max,
                   const LapConfig& cfg) {
  if (!(lambda_min > cfg.resolvent.lambda_floor) || !(lambda_max > lambda_min))
    throw StructuralError("sweep window must satisfy floor < a < b");
  if (cfg.eps_ladder.empty()) throw StructuralError("eps ladder is empty");
  if (!(cfg.step > 0.0) || !(cfg.exclusion_radius > 0.0)) throw StructuralError("sweep step and radius must be > 0");

  LapSweep sweep;
  sweep.lambda_min = lambda_min;
  sweep.lambda_max = lambda_max;
  sweep.eps_ladder = cfg.eps_ladder;
  const double r = cfg.exclusion_radius;
  sweep.exceptional =
      exceptional_scan(g, std::max(cfg.resolvent.lambda_floor, lambda_min - r), lambda_max + r, cfg);

  std::vector<double> offenders;
  for (const ExceptionalPoint& p : sweep.exceptional.points) offenders.push_back(p.lambda);
  if (!offenders.empty() && !cfg.exclude) {
    std::string msg = "sweep window contains exceptional points:";
    for (const ExceptionalPoint& p : sweep.exceptional.points) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " %.15g (%s)", p.lambda, to_string(p.kind));
      msg += buf;
    }
    throw ExceptionalWindow(msg, offenders);
  }

  for (double lam : uniform_grid(lambda_min, lambda_max, cfg.step)) {
    if (near_any(lam, sweep.exceptional.points, r)) continue;
    LapPointSummary sum;
    sum.lambda = lam;
    sum.continued = continue_value(g, f, lam, cfg.resolvent).value;
    sum.min_abs = INFINITY;
    std::vector<double> small_eps, small_dev;
    for (double eps : cfg.eps_ladder) {
      LapCell c;
      c.lambda = lam;
      c.eps = eps;
      c.value = solve_full(g, f, cplx(lam, eps), cfg.resolvent).value;
      c.continued = sum.continued;
      c.deviation = std::abs(c.value - c.continued);
      sum.sup_abs = std::max(sum.sup_abs, std::abs(c.value));
      sum.min_abs = std::min(sum.min_abs, std::abs(c.value));
      if (eps <= 1e-2 + 1e-15) {
        small_eps.push_back(eps);
        small_dev.push_back(c.deviation);
      }
      sum.final_deviation = c.deviation;
      sweep.cells.push_back(c);
    }
    sum.variation = sum.min_abs > 0.0 ? sum.sup_abs / sum.min_abs : (sum.sup_abs == 0.0 ? 1.0 : INFINITY);

    // Monotone decrease with eps (ladder may be given in either order).
    std::vector<std::size_t> order(small_eps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return small_eps[a] > small_eps[b]; });
    int violations = 0;
    for (std::size_t i = 1; i < order.size(); ++i)
      if (small_dev[order[i]] > small_dev[order[i - 1]]) ++violations;
    sum.monotone = violations <= 1;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < small_eps.size(); ++i) {
      if (!(small_dev[i] > 0.0)) continue;
      const double x = std::log10(small_eps[i]), y = std::log10(small_dev[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    if (m >= 2) sum.rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    sweep.points.push_back(sum);
  }
  return sweep;
}

ProbeResult embedded_probe(const MetricGraph& g, const CompositeFunction& f, double lambda_star,
                           const std::vector<double>& eps_ladder, const ResolventOptions& opts) {
  if (eps_ladder.size() < 3) throw StructuralError("embedded probe needs at least 3 eps values");
  if (!(lambda_star > opts.lambda_floor)) throw ThresholdExcluded(lambda_star);

  ProbeResult res;
  res.eps = eps_ladder;
  const double eps_min = *std::min_element(eps_ladder.begin(), eps_ladder.end());
  if (!(eps_min > 0.0)) throw StructuralError("eps values must be > 0");

  // Relative least squares: rows (eps_min/eps, 1) / |v| against 1.
  const auto m = static_cast<Eigen::Index>(eps_ladder.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double eps = eps_ladder[static_cast<std::size_t>(i)];
    const cplx v = solve_full(g, f, cplx(lambda_star, eps), opts).value;
    res.values.push_back(v);
    const double w = std::abs(v) > 0.0 ? 1.0 / std::abs(v) : 1.0;
    X(i, 0) = w * eps_min / eps;
    X(i, 1) = w;
    y(i) = w * std::abs(v);
  }
  if (std::all_of(res.values.begin(), res.values.end(), [](cplx v) { return v == cplx(0.0); })) return res;

  const Eigen::Vector2d coef = X.colPivHouseholderQr().solve(y);
  res.pole_coefficient = coef(0) * eps_min;
  res.background = coef(1);
  const double pole_at_min = coef(0);  // c / eps_min
  if (pole_at_min > 0.0 && pole_at_min > 10.0 * std::abs(res.background))
    res.classification = ProbeClass::EmbeddedEigenvalue;
  return res;
}

}  // namespace qgraph
