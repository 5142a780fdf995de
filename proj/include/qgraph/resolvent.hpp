#pragma once

#include "qgraph/dtn.hpp"
#include "qgraph/graph_model.hpp"
#include "qgraph/halfline.hpp"
#include "qgraph/interior.hpp"
#include "qgraph/types.hpp"

namespace qgraph {

/// f = (f0, f1): forcing on the compact part and on the leads.
struct CompositeFunction {
  InteriorForcing interior;
  LeadFunction leads;

  bool is_zero() const;
};

/// Which expression for the lead amplitude A(lambda) to use.
///  Derived: A = (k + i Lambda)^{-1} (Lambda rf1(0) + g), which satisfies the Robin condition.
///  Printed: A = Lambda (k + i Lambda)^{-1} rf1(0) + g / k, kept for comparison.
enum class AFormula { Derived, Printed };

/// Physical: k with Im k >= 0 (for Im lambda < 0 this is minus the principal root).
/// Continued: principal root, continuing the upper half-plane through (0, inf).
enum class Sheet { Physical, Continued };

inline constexpr double kResidualTol = 1e-8;
inline constexpr double kPoleTol = 1e-12;

struct ResolventOptions {
  AFormula formula = AFormula::Derived;
  double res_tol = kResidualTol;
  double lambda_floor = kLambdaFloor;
};

struct ResolventSample {
  cplx lambda = 0.0;
  cplx k = 0.0;
  CMatrix dtn;
  CVector g;
  CVector A;
  CVector u1_at_zero;
  cplx value = 0.0;  // (R(lambda) f, f) = (u0, f0) + (u1, f1)
  double robin_residual = 0.0;   // |u1'(0) - Lambda u1(0) - g|
  double trace_residual = 0.0;   // |u0|_B - u1(0)|
  double vertex_residual = 0.0;  // |u1'(0) - N u0| with N u0 from the reconstructed interior solution
  double scale = 1.0;
  bool valid = false;
};

/// Throws ContinuationPole when k I + i Lambda is singular.
CVector robin_coefficient(const CMatrix& dtn, const CVector& g, const CVector& rf1_at_zero, cplx k,
                          AFormula formula = AFormula::Derived);

/// Resolvent quadratic form on the physical sheet.
ResolventSample solve_full(const MetricGraph& g, const CompositeFunction& f, cplx lambda,
                           const ResolventOptions& opts = {});

/// Same closed formulas with the principal root: for real lambda > 0 this is the
/// boundary value lim_{eps -> 0+} (R(lambda + i eps) f, f).
ResolventSample continue_value(const MetricGraph& g, const CompositeFunction& f, cplx lambda,
                               const ResolventOptions& opts = {});

/// Shared implementation with an explicit sheet.
ResolventSample evaluate_resolvent(const MetricGraph& g, const CompositeFunction& f, cplx lambda, Sheet sheet,
                                   const ResolventOptions& opts = {});

/// sigma_min(k I + i Lambda(lambda)) with the principal k.
double robin_matrix_smin(const MetricGraph& g, cplx lambda);

}  // namespace qgraph
