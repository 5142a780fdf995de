#pragma once

#include <vector>

#include "qgraph/types.hpp"

namespace qgraph {

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
class GaussLegendre {
public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integral over [a, b] of a complex-valued f.
  template <class F>
  cplx integrate(double a, double b, F&& f) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(mid + half * nodes_[i]);
    return acc * half;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr int kPanelOrder = 12;

/// The shared order-12 rule used by every panel integration.
const GaussLegendre& panel_rule();

/// Longest panel that resolves oscillations at wavenumber |k|.
double max_panel_length(cplx k);

/// Splits [a, b] into equal panels no longer than `max_len`; returns the breakpoints.
std::vector<double> panel_breaks(double a, double b, double max_len);

}  // namespace qgraph
