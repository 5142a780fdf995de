#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qgraph/graph_model.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/types.hpp"

namespace qgraph {

/// c(x) = cos(sqrt(lambda) x), s(x) = sin(sqrt(lambda) x)/sqrt(lambda) and their
/// x-derivatives. Both are entire in lambda.
struct FundamentalValues {
  cplx c;
  cplx dc;
  cplx s;
  cplx ds;
};

/// Below this value of |lambda| x^2 the Taylor series replaces the trig formulas.
inline constexpr double kSeriesThreshold = 1e-3;

FundamentalValues eval_fundamental(double x, cplx lambda);

/// u_p(x) = -int_0^x s(x - t) f(t) dt on one edge: the solution of
/// -u'' - lambda u = f with zero Cauchy data at x = 0.
class ParticularSolution {
public:
  ParticularSolution() = default;
  ParticularSolution(const EdgeForcing& f, cplx lambda);

  bool is_zero() const { return breaks_.empty(); }
  /// (u_p(x), u_p'(x)).
  std::pair<cplx, cplx> value(double x) const;

private:
  EdgeForcing forcing_;
  cplx lambda_ = 0.0;
  std::vector<double> breaks_;
  std::vector<int> piece_;  // forcing piece for panel j, -1 in gaps
  std::vector<cplx> u_;
  std::vector<cplx> du_;
};

/// Forcing on the compact part, keyed by edge id.
using InteriorForcing = std::map<int, EdgeForcing>;

/// u_e = alpha c + beta s + u_p on one edge.
struct EdgeSolution {
  cplx alpha = 0.0;
  cplx beta = 0.0;
  ParticularSolution particular;
};

struct InteriorSolution {
  cplx lambda = 0.0;
  std::vector<EdgeSolution> edges;  // indexed like MetricGraph::edges()
};

/// M(lambda) coeffs = rhs, unknowns (alpha_e, beta_e) in edge order.
struct InteriorSystem {
  CMatrix M;
  CVector rhs;
  std::vector<Eigen::Index> boundary_rows;  // row of each boundary vertex, by boundary index
};

/// Rows: the (orthonormalized) vertex condition at every non-boundary vertex,
/// then u(v) = phi_v at each boundary vertex, grouped by vertex id.
InteriorSystem assemble_interior(const MetricGraph& g, cplx lambda, const CVector& phi,
                                 const InteriorForcing& f0 = {});

/// sigma_min < kSingularTol * ||M|| marks lambda as (numerically) in sigma(H0).
inline constexpr double kSingularTol = 1e-8;

/// Factorized interior system at one lambda, reused across right-hand sides.
class InteriorSolver {
public:
  InteriorSolver(const MetricGraph& g, cplx lambda);

  cplx lambda() const { return lambda_; }
  const CMatrix& matrix() const { return system_.M; }
  double norm() const { return norm_; }
  double sigma_min() const { return sigma_min_; }
  double relative_sigma_min() const { return norm_ > 0.0 ? sigma_min_ / norm_ : 0.0; }
  bool near_singular() const { return sigma_min_ < kSingularTol * norm_; }

  /// Throws NearSingular when near_singular().
  InteriorSolution solve(const CVector& phi, const InteriorForcing& f0 = {}) const;
  /// Homogeneous solves for several boundary data columns (no forcing).
  CMatrix solve_boundary(const CMatrix& phi_columns) const;

private:
  const MetricGraph* graph_;
  cplx lambda_;
  InteriorSystem system_;
  Eigen::JacobiSVD<CMatrix> svd_;
  double norm_ = 0.0;
  double sigma_min_ = 0.0;
};

InteriorSolution solve_interior(const MetricGraph& g, cplx lambda, const CVector& phi,
                                const InteriorForcing& f0 = {});

/// (u, u') at coordinate x of the given edge. Throws StructuralError when x is outside [0, l].
std::pair<cplx, cplx> trace(const InteriorSolution& sol, const MetricGraph& g, int edge_id, double x);

/// Values of the homogeneous edge representation for a bare coefficient pair.
std::pair<cplx, cplx> trace_coefficients(cplx alpha, cplx beta, double x, cplx lambda);

}  // namespace qgraph
