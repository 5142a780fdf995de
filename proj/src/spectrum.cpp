#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "qgraph/errors.hpp"
#include "qgraph/interior.hpp"

namespace qgraph {

namespace {

Eigen::VectorXd singular_values(const MetricGraph& g, cplx lambda) {
  const CVector zero = CVector::Zero(static_cast<Eigen::Index>(g.boundary_size()));
  const InteriorSystem sys = assemble_interior(g, lambda, zero);
  Eigen::JacobiSVD<CMatrix> svd(sys.M);
  return svd.singularValues();
}

double relative_smin(const Eigen::VectorXd& sv) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

}  // namespace

double smin_profile(const MetricGraph& g, cplx lambda) { return relative_smin(singular_values(g, lambda)); }

ScanConfig default_scan_config(const MetricGraph& g, double lambda_min, double lambda_max) {
  ScanConfig cfg;
  cfg.lambda_min = lambda_min;
  cfg.lambda_max = lambda_max;
  const double lmax = std::max(g.max_edge_length(), 1e-12);
  cfg.step = 0.01 * (kPi / lmax) * (kPi / lmax);
  return cfg;
}

std::vector<EigenvalueHit> find_eigenvalues(const MetricGraph& g, const ScanConfig& cfg) {
  if (!(cfg.step > 0.0)) throw StructuralError("scan step must be > 0");
  if (!(cfg.lambda_min < cfg.lambda_max)) throw StructuralError("scan window must satisfy min < max");
  if (!(cfg.accept_tol > 0.0) || !(cfg.merge_tol > 0.0)) throw StructuralError("scan tolerances must be > 0");

  const auto count = static_cast<std::size_t>(std::ceil((cfg.lambda_max - cfg.lambda_min) / cfg.step - 1e-9));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    grid[i] = i == count ? cfg.lambda_max : cfg.lambda_min + cfg.step * static_cast<double>(i);
  std::vector<double> prof(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) prof[i] = smin_profile(g, grid[i]);

  std::vector<EigenvalueHit> hits;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool left_ok = i == 0 || prof[i] <= prof[i - 1];
    const bool right_ok = i + 1 == grid.size() || prof[i] < prof[i + 1];
    if (!left_ok || !right_ok) continue;

    double a = grid[i == 0 ? 0 : i - 1];
    double b = grid[i + 1 == grid.size() ? i : i + 1];
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = smin_profile(g, x1), f2 = smin_profile(g, x2);
    for (int it = 0; it < cfg.max_iterations; ++it) {
      if (b - a <= 1e-12 * std::max(1.0, std::abs(0.5 * (a + b)))) break;
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = smin_profile(g, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = smin_profile(g, x2);
      }
    }
    const double lam = f1 < f2 ? x1 : x2;
    const Eigen::VectorXd sv = singular_values(g, lam);
    const double rel = relative_smin(sv);
    if (!(rel < cfg.accept_tol)) continue;
    int nullity = 0;
    for (Eigen::Index j = 0; j < sv.size(); ++j)
      if (sv(j) < cfg.accept_tol * sv(0)) ++nullity;
    hits.push_back(EigenvalueHit{lam, nullity, rel});
  }

  std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) { return x.lambda < y.lambda; });
  std::vector<EigenvalueHit> merged;
  for (const EigenvalueHit& h : hits) {
    if (!merged.empty() && h.lambda - merged.back().lambda <= cfg.merge_tol) {
      if (h.sigma_min < merged.back().sigma_min) merged.back() = h;
      continue;
    }
    merged.push_back(h);
  }
  return merged;
}

double boundary_flux_defect(const MetricGraph& g, double lambda, int multiplicity) {
  const auto& att = g.attachments();
  const CVector zero = CVector::Zero(static_cast<Eigen::Index>(att.size()));
  const InteriorSystem sys = assemble_interior(g, lambda, zero);
  Eigen::JacobiSVD<CMatrix> svd(sys.M, Eigen::ComputeFullV);
  const auto m = static_cast<Eigen::Index>(std::max(1, multiplicity));
  const CMatrix V = svd.matrixV().rightCols(m);

  CMatrix flux(static_cast<Eigen::Index>(att.size()), m);
  for (std::size_t b = 0; b < att.size(); ++b) {
    const auto col = static_cast<Eigen::Index>(2 * att[b].edge_index);
    const auto r = static_cast<Eigen::Index>(b);
    if (att[b].end == Endpoint::End) {
      const FundamentalValues fv = eval_fundamental(g.edges()[att[b].edge_index].length, lambda);
      flux.row(r) = fv.dc * V.row(col) + fv.ds * V.row(col + 1);
    } else {
      flux.row(r) = -V.row(col + 1);
    }
  }
  if (flux.rows() < m) return 0.0;
  Eigen::JacobiSVD<CMatrix> fs(flux);
  return fs.singularValues()(m - 1);
}

}  // namespace qgraph
