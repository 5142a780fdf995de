#pragma once

#include <functional>
#include <vector>

#include "qgraph/polynomial.hpp"
#include "qgraph/types.hpp"

namespace qgraph {

/// |lambda| below this is the excluded threshold region.
inline constexpr double kLambdaFloor = 1e-6;

/// Principal square root: Im k > 0 on the upper half-plane, continued through (0, inf)
/// into the lower half-plane. Throws ThresholdExcluded on (-inf, 0] and |lambda| < floor.
cplx branch_k(cplx lambda, double lambda_floor = kLambdaFloor);

/// Neumann resolvent (P - k^2)^{-1} f on [0, inf) for one compactly supported component:
///   (r f)(x) = (i / 2k) int_0^inf (e^{ik(x+s)} + e^{ik|x-s|}) f(s) ds.
/// Valid for Im k > 0 and, since f has compact support, for any k != 0 by continuation.
class NeumannResolvent {
public:
  NeumannResolvent(const PiecewisePolynomial& f, cplx k);

  cplx value(double x) const;
  cplx derivative(double x) const;
  cplx at_zero() const { return kI / k_ * outgoing_total_; }
  cplx k() const { return k_; }

private:
  /// (int_0^x e^{-iks} f, int_x^inf e^{iks} f)
  std::pair<cplx, cplx> split_integrals(double x) const;

  PiecewisePolynomial f_;
  cplx k_;
  std::vector<double> breaks_;
  std::vector<int> piece_;
  std::vector<cplx> prefix_in_;    // int_0^{breaks_j} e^{-iks} f
  std::vector<cplx> suffix_out_;   // int_{breaks_j}^inf e^{iks} f
  cplx outgoing_total_ = 0.0;      // int_0^inf e^{iks} f
};

/// n-component function on the leads, indexed by boundary index.
struct LeadFunction {
  std::vector<PiecewisePolynomial> components;

  std::size_t size() const { return components.size(); }
  double support_bound() const;
  bool is_zero() const;
};

/// (r(lambda) f)(x) componentwise with k = branch_k(lambda).
CVector neumann_resolvent_eval(const LeadFunction& f, cplx lambda, double x);
/// (r(lambda) f)'(0), computed from the kernel; vanishes by the Neumann property.
CVector neumann_derivative_at_zero(const LeadFunction& f, cplx lambda);

/// int u(x) conj(f(x)) dx over the support of f. `k` sets the panel length for
/// oscillatory u (pass the wavenumber of u, or 0 for slowly varying u).
cplx lead_inner_product(const std::function<cplx(double)>& u, const PiecewisePolynomial& f, cplx k = 0.0);
/// Sum of the componentwise inner products; u(j, x) is component j at x.
cplx lead_inner_product(const std::function<cplx(std::size_t, double)>& u, const LeadFunction& f,
                        cplx k = 0.0);

}  // namespace qgraph
