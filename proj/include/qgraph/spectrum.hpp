#pragma once

#include <vector>

#include "qgraph/graph_model.hpp"
#include "qgraph/types.hpp"

namespace qgraph {

/// sigma_min(M(lambda)) / ||M(lambda)|| of the interior Dirichlet system.
double smin_profile(const MetricGraph& g, cplx lambda);

struct ScanConfig {
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  double step = 0.01;
  double accept_tol = 1e-8;
  double merge_tol = 1e-6;
  int max_iterations = 200;
};

/// Step 0.01 (pi / l_max)^2 over the given window.
ScanConfig default_scan_config(const MetricGraph& g, double lambda_min, double lambda_max);

struct EigenvalueHit {
  double lambda = 0.0;
  int multiplicity = 0;
  double sigma_min = 0.0;  // relative, at the refined point
};

/// Grid scan of smin_profile, golden-section refinement of every local minimum,
/// acceptance below accept_tol. Eigenvalues closer than one grid step may merge.
std::vector<EigenvalueHit> find_eigenvalues(const MetricGraph& g, const ScanConfig& cfg);

/// Smallest singular value of N applied to the eigenspace at lambda (spanned by the
/// `multiplicity` smallest right singular vectors of M). Near zero means some
/// eigenfunction of H0 has vanishing normal derivative on the whole boundary.
double boundary_flux_defect(const MetricGraph& g, double lambda, int multiplicity);

}  // namespace qgraph
