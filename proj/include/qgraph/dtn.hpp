#pragma once

#include "qgraph/graph_model.hpp"
#include "qgraph/interior.hpp"
#include "qgraph/types.hpp"

namespace qgraph {

/// Lambda(lambda): boundary values -> normal derivatives on B, indexed by the boundary index map.
struct DtNMatrix {
  cplx lambda = 0.0;
  CMatrix matrix;
  double sigma_min = 0.0;  // relative sigma_min of the interior system
};

/// g(lambda) = N R0(lambda) f0.
struct RobinData {
  cplx lambda = 0.0;
  CVector g;
};

/// Derivative at each boundary vertex taken toward the vertex along its edge.
CVector normal_derivative(const InteriorSolution& sol, const MetricGraph& g);

DtNMatrix dtn_matrix(const MetricGraph& g, cplx lambda);
/// Same, reusing an existing factorization.
DtNMatrix dtn_matrix(const InteriorSolver& solver, const MetricGraph& g);

RobinData robin_data(const MetricGraph& g, cplx lambda, const InteriorForcing& f0);
RobinData robin_data(const InteriorSolver& solver, const MetricGraph& g, const InteriorForcing& f0);

/// Extension E: boundary data -> functions on the compact part equal to phi_v near v
/// with zero derivative there. Each profile is the quintic 1 - 10t^3 + 15t^4 - 6t^5
/// in t = dist(v)/r on the edge at v, with r = half the shortest edge.
class ExtensionOperator {
public:
  explicit ExtensionOperator(const MetricGraph& g);

  double support_radius() const { return radius_; }
  /// E phi as piecewise polynomial forcing data.
  InteriorForcing apply(const CVector& phi) const;
  /// (d^2/dx^2 + lambda) E phi.
  InteriorForcing apply_shifted_laplacian(const CVector& phi, cplx lambda) const;

private:
  InteriorForcing build(const CVector& phi, bool laplacian, cplx lambda) const;

  const MetricGraph* graph_;
  double radius_;
};

/// Lambda(lambda) phi computed as N R0(lambda) (d^2/dx^2 + lambda) E phi.
CVector dtn_via_extension(const MetricGraph& g, cplx lambda, const CVector& phi);

}  // namespace qgraph
