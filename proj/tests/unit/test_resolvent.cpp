#include "doctest.h"

#include <random>

#include "../support/oracles.hpp"
#include "../support/test_graphs.hpp"
#include "qgraph/errors.hpp"
#include "qgraph/io.hpp"
#include "qgraph/resolvent.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;

namespace {

/// Full line of length 2 with bumps on the edge and on both leads, plus the same
/// function written on the real line (lead 1 runs along t = -x, lead 2 along t = 2 + x).
struct LineCase {
  MetricGraph g = fixtures::full_line(2.0);
  CompositeFunction f;
  std::vector<oracle::LinePiece> line;

  LineCase() {
    f = fixtures::zero_function(g);
    const auto e = fixtures::bump(0.5, 1.0) * cplx(1.0, 0.5);
    const auto l1 = fixtures::bump(0.5, 1.5);
    const auto l2 = fixtures::piece(0.0, 1.0, {1.0, -1.0}) * cplx(0.0, -0.7);
    f.interior[1] = e;
    f.leads.components = {l1, l2};
    line = {{-2.0, -0.5, [l1](double t) { return l1(-t); }},
            {0.5, 1.5, [e](double t) { return e(t); }},
            {2.0, 3.0, [l2](double t) { return l2(t - 2.0); }}};
  }
};

}  // namespace

TEST_CASE("Robin coefficient satisfies k A + i Lambda A = Lambda rf(0) + g") {
  CMatrix L(2, 2);
  L << 1.0, cplx(0.3, 0.1), cplx(0.3, -0.1), -2.0;
  CVector g(2), r(2);
  g << 0.5, cplx(0, 1);
  r << cplx(1, 1), -0.25;
  const cplx k(1.7, 0.2);
  const CVector A = robin_coefficient(L, g, r, k);
  const CVector lhs = k * A + cplx(0, 1) * L * A;
  CHECK((lhs - (L * r + g)).norm() < 1e-14);
  // printed variant
  const CVector P = robin_coefficient(L, g, r, k, AFormula::Printed);
  const CMatrix K = k * CMatrix::Identity(2, 2) + cplx(0, 1) * L;
  CHECK((P - (L * K.inverse() * r + g / k)).norm() < 1e-13);
}

TEST_CASE("Robin coefficient throws at a pole") {
  // k + i Lambda = 0 for Lambda = i k
  CMatrix L(1, 1);
  const cplx k(2.0, 0.0);
  L(0, 0) = cplx(0, 1) * k;
  CHECK_THROWS_AS(robin_coefficient(L, CVector::Ones(1), CVector::Ones(1), k), ContinuationPole);
}

TEST_CASE("zero function gives zero") {
  const MetricGraph g = fixtures::three_star();
  const auto s = solve_full(g, fixtures::zero_function(g), cplx(2.0, 0.5));
  CHECK(s.value == 0.0);
  CHECK(s.valid);
  CHECK(s.A.norm() == 0.0);
}

TEST_CASE("full line with forcing everywhere matches the whole-line kernel") {
  const LineCase c;
  for (cplx lam : {cplx(1.0, 1.0), cplx(5.0, 0.2), cplx(-3.0, 0.5), cplx(12.0, 0.01)}) {
    const auto s = solve_full(c.g, c.f, lam);
    cplx k = std::sqrt(lam);
    if (k.imag() < 0) k = -k;
    const cplx ref = oracle::whole_line_form(c.line, k);
    INFO("lambda = " << lam);
    CHECK(s.valid);
    CHECK(std::abs(s.value - ref) < 1e-9 * std::abs(ref));
  }
}

TEST_CASE("continued value on the real axis matches the whole-line kernel") {
  const LineCase c;
  for (double lam : {0.8, 3.7, 9.1}) {
    const cplx ref = oracle::whole_line_form(c.line, std::sqrt(lam));
    CHECK(std::abs(continue_value(c.g, c.f, lam).value - ref) < 1e-9 * std::abs(ref));
  }
}

TEST_CASE("lower half-plane on the physical sheet matches the kernel with Im k >= 0") {
  const LineCase c;
  const cplx lam(4.0, -0.6);
  cplx k = std::sqrt(lam);
  if (k.imag() < 0) k = -k;
  CHECK(std::abs(solve_full(c.g, c.f, lam).value - oracle::whole_line_form(c.line, k)) < 1e-9);
}

TEST_CASE("Herglotz: Im (R f, f) > 0 on the upper half-plane") {
  for (const auto& [name, g] : fixtures::corpus()) {
    const auto f = fixtures::corpus_function(g);
    for (double re = 0.5; re < 20.0; re += 1.3) {
      const auto s = solve_full(g, f, cplx(re, 0.3));
      INFO(name << " at " << re);
      CHECK(s.valid);
      CHECK(s.value.imag() > 0.0);
    }
  }
}

TEST_CASE("continued value is the limit from above and conjugates from below") {
  const MetricGraph g = fixtures::asym2();
  const auto f = fixtures::corpus_function(g);
  const double lam = 3.7;
  const cplx F = continue_value(g, f, lam).value;
  const cplx near = solve_full(g, f, cplx(lam, 1e-7)).value;
  CHECK(std::abs(near - F) < 1e-5 * std::abs(F));
  // f real-symmetric is not assumed; compare with the conjugate function instead
  CompositeFunction fc = f;
  for (auto& [id, p] : fc.interior) {
    std::vector<PolyPiece> pieces;
    for (const auto& q : p.pieces()) {
      std::vector<cplx> cs;
      for (const auto& z : q.poly.coeffs()) cs.push_back(std::conj(z));
      pieces.push_back({q.x0, q.x1, Polynomial(cs)});
    }
    p = PiecewisePolynomial(pieces);
  }
  for (auto& p : fc.leads.components) {
    std::vector<PolyPiece> pieces;
    for (const auto& q : p.pieces()) {
      std::vector<cplx> cs;
      for (const auto& z : q.poly.coeffs()) cs.push_back(std::conj(z));
      pieces.push_back({q.x0, q.x1, Polynomial(cs)});
    }
    p = PiecewisePolynomial(pieces);
  }
  // asym2 has real conditions, so R(conj z) conj f = conj(R(z) f)
  const cplx z(6.0, 0.8);
  CHECK(std::abs(solve_full(g, fc, std::conj(z)).value - std::conj(solve_full(g, f, z).value)) < 1e-11);
}

TEST_CASE("resolvent form is holomorphic: Cauchy-Riemann") {
  const MetricGraph g = fixtures::random5();
  const auto f = fixtures::corpus_function(g);
  const cplx z(4.2, 0.5);
  const double h = 1e-5;
  const cplx dx = (solve_full(g, f, z + h).value - solve_full(g, f, z - h).value) / (2.0 * h);
  const cplx dy = (solve_full(g, f, z + cplx(0, h)).value - solve_full(g, f, z - cplx(0, h)).value) / (2.0 * h);
  CHECK(std::abs(dy - cplx(0, 1) * dx) < 1e-5 * std::max(1.0, std::abs(dx)));
}

TEST_CASE("sigma_min(k + i Lambda) >= k on the real axis") {
  // Lambda is Hermitian there, so k + i Lambda has singular values >= k
  for (const auto& [name, g] : fixtures::corpus()) {
    for (double lam = 0.3; lam < 25.0; lam += 0.77) {
      if (smin_profile(g, lam) < 1e-4) continue;
      INFO(name << " at " << lam);
      CHECK(robin_matrix_smin(g, lam) >= std::sqrt(lam) * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("residual diagnostics are at roundoff on the corpus") {
  for (const auto& [name, g] : fixtures::corpus()) {
    const auto f = fixtures::corpus_function(g, 3);
    for (cplx lam : {cplx(1.3, 0.4), cplx(7.7, 1.0), cplx(15.0, 0.05)}) {
      const auto s = solve_full(g, f, lam);
      INFO(name << " at " << lam);
      CHECK(s.robin_residual <= 1e-10 * s.scale);
      CHECK(s.trace_residual <= 1e-10 * s.scale);
      CHECK(s.vertex_residual <= 1e-8 * s.scale);
    }
  }
}

TEST_CASE("solve_full reports interior eigenvalues") {
  const MetricGraph g = fixtures::interval_lead(kPi);
  const auto f = fixtures::corpus_function(g);
  CHECK_THROWS_AS(continue_value(g, f, 4.0), NearSingular);
  CHECK_THROWS_AS(solve_full(g, f, 1e-9), ThresholdExcluded);
}

TEST_CASE("split offset does not change the form") {
  // vertex 0 carries two leads, so both get split; the function sits on the leads
  // across both split points and on the edge.
  MetricGraph::Builder b;
  b.add_vertex(0).add_vertex(1, {ConditionKind::Dirichlet}).add_edge(1, 0, 1, 1.5).add_lead(1, 0).add_lead(2, 0);
  const MetricGraph raw = b.build();
  const FunctionDescription d = parse_function(
      "[edge]\nid = 1\npiece = 0.2, 1.2 : 0, 0, 16, -32, 16\n"
      "[lead]\nid = 1\npiece = 0.1, 2.1 : 0, 0, 4, -4, 1\n"
      "[lead]\nid = 2\npiece = 0.0, 1.0 : 1, -1\n");
  for (cplx lam : {cplx(2.5, 0.3), cplx(11.0, 0.02)}) {
    const MetricGraph n1 = normalize_boundary(raw, 0.5);
    const MetricGraph n2 = normalize_boundary(raw, 1.3);
    const cplx v1 = solve_full(n1, bind_function(d, n1), lam).value;
    const cplx v2 = solve_full(n2, bind_function(d, n2), lam).value;
    CHECK(std::abs(v1 - v2) < 1e-9 * std::max(1.0, std::abs(v1)));
  }
}

TEST_CASE("printed formula disagrees with the derived one and breaks the Robin condition") {
  const MetricGraph g = fixtures::three_star(1.0, 1.3, 0.7);
  const auto f = fixtures::corpus_function(g);
  ResolventOptions o;
  o.formula = AFormula::Printed;
  const auto p = solve_full(g, f, cplx(3.0, 0.5), o);
  const auto d = solve_full(g, f, cplx(3.0, 0.5));
  CHECK(d.valid);
  CHECK(std::abs(p.value - d.value) > 1e-6);
  CHECK(p.robin_residual > 1e-6 * p.scale);
}
