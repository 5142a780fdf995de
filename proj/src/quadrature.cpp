#include "qgraph/quadrature.hpp"

#include <cmath>

#include "qgraph/errors.hpp"

namespace qgraph {

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw StructuralError("Gauss-Legendre order must be >= 1");
  const int n = order;
  nodes_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

const GaussLegendre& panel_rule() {
  static const GaussLegendre rule(kPanelOrder);
  return rule;
}

double max_panel_length(cplx k) { return kPi / (4.0 * (1.0 + std::abs(k))); }

std::vector<double> panel_breaks(double a, double b, double max_len) {
  std::vector<double> br;
  if (!(b > a)) {
    br.push_back(a);
    return br;
  }
  const auto count = static_cast<int>(std::ceil((b - a) / max_len - 1e-12));
  const int n = std::max(1, count);
  br.reserve(n + 1);
  for (int i = 0; i <= n; ++i) br.push_back(i == n ? b : a + (b - a) * i / n);
  return br;
}

}  // namespace qgraph
