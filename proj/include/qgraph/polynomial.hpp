#pragma once

#include <limits>
#include <vector>

#include "qgraph/types.hpp"

namespace qgraph {

/// Complex polynomial, coefficients from low to high degree.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;

  cplx operator()(cplx y) const;
  cplx operator()(double y) const { return (*this)(cplx(y, 0.0)); }

  Polynomial derivative() const;
  /// q(y) = p(a + b y)
  Polynomial compose_affine(double a, double b) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(cplx s) const;

private:
  std::vector<cplx> coeffs_;
};

inline constexpr int kMaxPieceDegree = 10;

/// Polynomial on [x0, x1] written in the local variable y = x - x0.
struct PolyPiece {
  double x0 = 0.0;
  double x1 = 0.0;
  Polynomial poly;

  cplx value(double x) const { return poly(x - x0); }
};

/// Compactly supported piecewise polynomial on an edge or a lead. Pieces are
/// sorted and non-overlapping; the function is zero outside them.
class PiecewisePolynomial {
public:
  PiecewisePolynomial() = default;
  explicit PiecewisePolynomial(std::vector<PolyPiece> pieces);

  const std::vector<PolyPiece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  /// Right end of the support (0 when empty).
  double support_end() const;

  /// Throws StructuralError unless all pieces lie in [0, domain_end].
  void check_domain(double domain_end) const;

  cplx operator()(double x) const;

  PiecewisePolynomial operator+(const PiecewisePolynomial& o) const;
  PiecewisePolynomial operator*(cplx s) const;

  /// Restriction to [a, b] re-expressed with coordinate x - shift.
  PiecewisePolynomial restrict(double a, double b, double shift = 0.0) const;

private:
  std::vector<PolyPiece> pieces_;
};

/// Per-edge forcing on the compact part; also the representation of lead functions.
using EdgeForcing = PiecewisePolynomial;

}  // namespace qgraph
