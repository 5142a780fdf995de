#include "qgraph/polynomial.hpp"

#include <algorithm>
#include <set>

#include "qgraph/errors.hpp"

namespace qgraph {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
}

bool Polynomial::is_zero() const { return coeffs_.empty(); }

cplx Polynomial::operator()(cplx y) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * y + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = coeffs_[j] * static_cast<double>(j);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::compose_affine(double a, double b) const {
  // Horner in polynomial arithmetic: acc = acc * (a + b y) + c_j.
  std::vector<cplx> acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    std::vector<cplx> next(acc.size() + 1, cplx(0.0));
    for (std::size_t j = 0; j < acc.size(); ++j) {
      next[j] += acc[j] * a;
      next[j + 1] += acc[j] * b;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return Polynomial(std::move(acc));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<cplx> s(std::max(coeffs_.size(), o.coeffs_.size()), cplx(0.0));
  for (std::size_t j = 0; j < coeffs_.size(); ++j) s[j] += coeffs_[j];
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) s[j] += o.coeffs_[j];
  return Polynomial(std::move(s));
}

Polynomial Polynomial::operator*(cplx s) const {
  std::vector<cplx> c = coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------

PiecewisePolynomial::PiecewisePolynomial(std::vector<PolyPiece> pieces) : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const auto& a, const auto& b) { return a.x0 < b.x0; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const PolyPiece& p = pieces_[i];
    if (!(p.x1 > p.x0)) throw StructuralError("forcing piece must satisfy x0 < x1");
    if (p.poly.degree() > kMaxPieceDegree)
      throw StructuralError("forcing piece degree exceeds " + std::to_string(kMaxPieceDegree));
    if (i > 0 && p.x0 < pieces_[i - 1].x1) throw StructuralError("forcing pieces overlap");
  }
}

double PiecewisePolynomial::support_end() const { return pieces_.empty() ? 0.0 : pieces_.back().x1; }

void PiecewisePolynomial::check_domain(double domain_end) const {
  for (const PolyPiece& p : pieces_)
    if (p.x0 < 0.0 || p.x1 > domain_end * (1.0 + 1e-14))
      throw StructuralError("forcing piece [" + std::to_string(p.x0) + ", " + std::to_string(p.x1) +
                            "] leaves the domain [0, " + std::to_string(domain_end) + "]");
}

cplx PiecewisePolynomial::operator()(double x) const {
  for (const PolyPiece& p : pieces_)
    if (x >= p.x0 && x <= p.x1) return p.value(x);
  return 0.0;
}

PiecewisePolynomial PiecewisePolynomial::operator+(const PiecewisePolynomial& o) const {
  std::set<double> cuts;
  for (const auto* src : {this, &o})
    for (const PolyPiece& p : src->pieces_) {
      cuts.insert(p.x0);
      cuts.insert(p.x1);
    }
  std::vector<double> pts(cuts.begin(), cuts.end());
  std::vector<PolyPiece> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    const double mid = 0.5 * (a + b);
    Polynomial sum;
    bool covered = false;
    for (const auto* src : {this, &o})
      for (const PolyPiece& p : src->pieces_)
        if (mid > p.x0 && mid < p.x1) {
          sum = sum + p.poly.compose_affine(a - p.x0, 1.0);
          covered = true;
        }
    if (covered) out.push_back(PolyPiece{a, b, sum});
  }
  return PiecewisePolynomial(std::move(out));
}

PiecewisePolynomial PiecewisePolynomial::operator*(cplx s) const {
  std::vector<PolyPiece> out = pieces_;
  for (auto& p : out) p.poly = p.poly * s;
  return PiecewisePolynomial(std::move(out));
}

PiecewisePolynomial PiecewisePolynomial::restrict(double a, double b, double shift) const {
  std::vector<PolyPiece> out;
  for (const PolyPiece& p : pieces_) {
    const double lo = std::max(a, p.x0), hi = std::min(b, p.x1);
    if (!(hi > lo)) continue;
    out.push_back(PolyPiece{lo - shift, hi - shift, p.poly.compose_affine(lo - p.x0, 1.0)});
  }
  return PiecewisePolynomial(std::move(out));
}

}  // namespace qgraph
