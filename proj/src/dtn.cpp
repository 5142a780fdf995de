#include "qgraph/dtn.hpp"

#include "qgraph/errors.hpp"

namespace qgraph {

CVector normal_derivative(const InteriorSolution& sol, const MetricGraph& g) {
  const auto& att = g.attachments();
  CVector out(static_cast<Eigen::Index>(att.size()));
  for (std::size_t b = 0; b < att.size(); ++b) {
    const Edge& e = g.edges()[att[b].edge_index];
    if (att[b].end == Endpoint::End) {
      out(static_cast<Eigen::Index>(b)) = trace(sol, g, e.id, e.length).second;
    } else {
      out(static_cast<Eigen::Index>(b)) = -trace(sol, g, e.id, 0.0).second;
    }
  }
  return out;
}

DtNMatrix dtn_matrix(const InteriorSolver& solver, const MetricGraph& g) {
  const auto& att = g.attachments();
  const auto n = static_cast<Eigen::Index>(att.size());
  const CMatrix coeffs = solver.solve_boundary(CMatrix::Identity(n, n));
  const cplx lambda = solver.lambda();

  DtNMatrix out;
  out.lambda = lambda;
  out.sigma_min = solver.relative_sigma_min();
  out.matrix = CMatrix::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const BoundaryAttachment& a = att[static_cast<std::size_t>(b)];
    const auto col = static_cast<Eigen::Index>(2 * a.edge_index);
    if (a.end == Endpoint::End) {
      const FundamentalValues fv = eval_fundamental(g.edges()[a.edge_index].length, lambda);
      out.matrix.row(b) = fv.dc * coeffs.row(col) + fv.ds * coeffs.row(col + 1);
    } else {
      out.matrix.row(b) = -coeffs.row(col + 1);
    }
  }
  return out;
}

DtNMatrix dtn_matrix(const MetricGraph& g, cplx lambda) { return dtn_matrix(InteriorSolver(g, lambda), g); }

RobinData robin_data(const InteriorSolver& solver, const MetricGraph& g, const InteriorForcing& f0) {
  RobinData out;
  out.lambda = solver.lambda();
  const CVector zero = CVector::Zero(static_cast<Eigen::Index>(g.boundary_size()));
  if (f0.empty()) {
    if (solver.near_singular()) throw NearSingular(solver.lambda(), solver.relative_sigma_min());
    out.g = zero;
    return out;
  }
  out.g = normal_derivative(solver.solve(zero, f0), g);
  return out;
}

RobinData robin_data(const MetricGraph& g, cplx lambda, const InteriorForcing& f0) {
  return robin_data(InteriorSolver(g, lambda), g, f0);
}

// ---------------------------------------------------------------------------

namespace {

// 1 - 10 t^3 + 15 t^4 - 6 t^5 on t in [0, 1]
Polynomial unit_profile() { return Polynomial({1.0, 0.0, 0.0, -10.0, 15.0, -6.0}); }

}  // namespace

ExtensionOperator::ExtensionOperator(const MetricGraph& g) : graph_(&g), radius_(0.5 * g.min_edge_length()) {
  (void)g.attachments();
}

InteriorForcing ExtensionOperator::build(const CVector& phi, bool laplacian, cplx lambda) const {
  const auto& att = graph_->attachments();
  if (phi.size() != static_cast<Eigen::Index>(att.size()))
    throw StructuralError("boundary data has wrong size for extension");
  const double r = radius_;
  InteriorForcing out;
  for (std::size_t b = 0; b < att.size(); ++b) {
    const cplx value = phi(static_cast<Eigen::Index>(b));
    if (value == cplx(0.0)) continue;
    const Edge& e = graph_->edges()[att[b].edge_index];
    // Profile in the local piece variable y: t = y / r at the start, t = (r - y) / r at the end.
    const bool at_start = att[b].end == Endpoint::Start;
    const Polynomial p =
        at_start ? unit_profile().compose_affine(0.0, 1.0 / r) : unit_profile().compose_affine(1.0, -1.0 / r);
    Polynomial q = p;
    if (laplacian) q = p.derivative().derivative() + p * lambda;
    const double x0 = at_start ? 0.0 : e.length - r;
    PiecewisePolynomial piece({PolyPiece{x0, x0 + r, q * value}});
    auto it = out.find(e.id);
    if (it == out.end())
      out.emplace(e.id, std::move(piece));
    else
      it->second = it->second + piece;
  }
  return out;
}

InteriorForcing ExtensionOperator::apply(const CVector& phi) const { return build(phi, false, 0.0); }

InteriorForcing ExtensionOperator::apply_shifted_laplacian(const CVector& phi, cplx lambda) const {
  return build(phi, true, lambda);
}

CVector dtn_via_extension(const MetricGraph& g, cplx lambda, const CVector& phi) {
  const ExtensionOperator ext(g);
  const InteriorForcing w = ext.apply_shifted_laplacian(phi, lambda);
  const CVector zero = CVector::Zero(static_cast<Eigen::Index>(g.boundary_size()));
  const InteriorSolver solver(g, lambda);
  if (w.empty()) {
    if (solver.near_singular()) throw NearSingular(lambda, solver.relative_sigma_min());
    return zero;
  }
  // u = g + E phi with g solving the forced problem with zero Dirichlet data; N E phi = 0.
  return normal_derivative(solver.solve(zero, w), g);
}

}  // namespace qgraph
