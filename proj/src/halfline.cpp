#include "qgraph/halfline.hpp"

#include <algorithm>
#include <cmath>

#include "qgraph/errors.hpp"
#include "qgraph/quadrature.hpp"

namespace qgraph {

cplx branch_k(cplx lambda, double lambda_floor) {
  if (std::abs(lambda) < lambda_floor || (lambda.imag() == 0.0 && lambda.real() <= 0.0))
    throw ThresholdExcluded(lambda);
  return std::sqrt(lambda);
}

// ---------------------------------------------------------------------------

NeumannResolvent::NeumannResolvent(const PiecewisePolynomial& f, cplx k) : f_(f), k_(k) {
  if (k == cplx(0.0)) throw ThresholdExcluded(0.0);
  if (f.empty()) return;
  const double max_len = max_panel_length(k);
  breaks_.push_back(0.0);
  double cursor = 0.0;
  for (std::size_t p = 0; p < f.pieces().size(); ++p) {
    const PolyPiece& piece = f.pieces()[p];
    if (piece.x0 > cursor) {
      breaks_.push_back(piece.x0);
      piece_.push_back(-1);
    }
    const auto br = panel_breaks(piece.x0, piece.x1, max_len);
    for (std::size_t j = 1; j < br.size(); ++j) {
      breaks_.push_back(br[j]);
      piece_.push_back(static_cast<int>(p));
    }
    cursor = piece.x1;
  }

  const GaussLegendre& rule = panel_rule();
  const std::size_t panels = piece_.size();
  std::vector<cplx> in(panels, 0.0), out(panels, 0.0);
  for (std::size_t j = 0; j < panels; ++j) {
    if (piece_[j] < 0) continue;
    const PolyPiece& piece = f.pieces()[piece_[j]];
    const double a = breaks_[j], b = breaks_[j + 1];
    in[j] = rule.integrate(a, b, [&](double s) { return std::exp(-kI * k * s) * piece.value(s); });
    out[j] = rule.integrate(a, b, [&](double s) { return std::exp(kI * k * s) * piece.value(s); });
  }
  prefix_in_.assign(breaks_.size(), 0.0);
  suffix_out_.assign(breaks_.size(), 0.0);
  for (std::size_t j = 0; j < panels; ++j) prefix_in_[j + 1] = prefix_in_[j] + in[j];
  for (std::size_t j = panels; j-- > 0;) suffix_out_[j] = suffix_out_[j + 1] + out[j];
  outgoing_total_ = suffix_out_[0];
}

std::pair<cplx, cplx> NeumannResolvent::split_integrals(double x) const {
  if (breaks_.empty()) return {0.0, 0.0};
  if (x <= 0.0) return {0.0, outgoing_total_};
  if (x >= breaks_.back()) return {prefix_in_.back(), 0.0};
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  cplx in = prefix_in_[j];
  cplx out = suffix_out_[j + 1];
  if (piece_[j] >= 0) {
    const PolyPiece& piece = f_.pieces()[piece_[j]];
    const GaussLegendre& rule = panel_rule();
    const double a = breaks_[j], b = breaks_[j + 1];
    if (x > a) in += rule.integrate(a, x, [&](double s) { return std::exp(-kI * k_ * s) * piece.value(s); });
    if (b > x) out += rule.integrate(x, b, [&](double s) { return std::exp(kI * k_ * s) * piece.value(s); });
  }
  return {in, out};
}

cplx NeumannResolvent::value(double x) const {
  const auto [in, out] = split_integrals(x);
  const cplx e = std::exp(kI * k_ * x);
  return kI / (2.0 * k_) * (e * (outgoing_total_ + in) + out / e);
}

cplx NeumannResolvent::derivative(double x) const {
  const auto [in, out] = split_integrals(x);
  const cplx e = std::exp(kI * k_ * x);
  // d/dx of the kernel form; the f(x) terms from the moving split point cancel.
  return kI / (2.0 * k_) * (kI * k_) * (e * (outgoing_total_ + in) - out / e);
}

// ---------------------------------------------------------------------------

double LeadFunction::support_bound() const {
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, c.support_end());
  return m;
}

bool LeadFunction::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](const auto& c) { return c.empty(); });
}

CVector neumann_resolvent_eval(const LeadFunction& f, cplx lambda, double x) {
  const cplx k = branch_k(lambda);
  CVector out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t j = 0; j < f.size(); ++j)
    out(static_cast<Eigen::Index>(j)) = NeumannResolvent(f.components[j], k).value(x);
  return out;
}

CVector neumann_derivative_at_zero(const LeadFunction& f, cplx lambda) {
  const cplx k = branch_k(lambda);
  CVector out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t j = 0; j < f.size(); ++j)
    out(static_cast<Eigen::Index>(j)) = NeumannResolvent(f.components[j], k).derivative(0.0);
  return out;
}

cplx lead_inner_product(const std::function<cplx(double)>& u, const PiecewisePolynomial& f, cplx k) {
  const GaussLegendre& rule = panel_rule();
  const double max_len = max_panel_length(k);
  cplx acc = 0.0;
  for (const PolyPiece& piece : f.pieces()) {
    const auto br = panel_breaks(piece.x0, piece.x1, max_len);
    for (std::size_t j = 0; j + 1 < br.size(); ++j)
      acc += rule.integrate(br[j], br[j + 1], [&](double x) { return u(x) * std::conj(piece.value(x)); });
  }
  return acc;
}

cplx lead_inner_product(const std::function<cplx(std::size_t, double)>& u, const LeadFunction& f, cplx k) {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    acc += lead_inner_product([&](double x) { return u(j, x); }, f.components[j], k);
  return acc;
}

}  // namespace qgraph
