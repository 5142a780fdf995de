#include "qgraph/resolvent.hpp"

#include <algorithm>

#include "qgraph/errors.hpp"

namespace qgraph {

bool CompositeFunction::is_zero() const {
  return leads.is_zero() &&
         std::all_of(interior.begin(), interior.end(), [](const auto& kv) { return kv.second.empty(); });
}

namespace {

CMatrix robin_matrix(const CMatrix& dtn, cplx k) {
  return k * CMatrix::Identity(dtn.rows(), dtn.cols()) + kI * dtn;
}

}  // namespace

CVector robin_coefficient(const CMatrix& dtn, const CVector& g, const CVector& rf1_at_zero, cplx k,
                          AFormula formula) {
  const auto n = dtn.rows();
  if (dtn.cols() != n || g.size() != n || rf1_at_zero.size() != n)
    throw StructuralError("robin_coefficient: inconsistent sizes");
  if (k == cplx(0.0)) throw ThresholdExcluded(0.0);
  if (n == 0) return CVector(0);

  const CMatrix R = robin_matrix(dtn, k);
  Eigen::JacobiSVD<CMatrix> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smin = sv(n - 1);
  if (smin < kPoleTol * std::max(std::abs(k), sv(0))) throw ContinuationPole(k * k, smin);

  if (formula == AFormula::Derived) return svd.solve(dtn * rf1_at_zero + g);
  return dtn * svd.solve(rf1_at_zero) + g / k;
}

double robin_matrix_smin(const MetricGraph& g, cplx lambda) {
  const cplx k = branch_k(lambda);
  const DtNMatrix d = dtn_matrix(g, lambda);
  Eigen::JacobiSVD<CMatrix> svd(robin_matrix(d.matrix, k));
  const auto& sv = svd.singularValues();
  return sv.size() ? sv(sv.size() - 1) : 0.0;
}

ResolventSample evaluate_resolvent(const MetricGraph& g, const CompositeFunction& f, cplx lambda, Sheet sheet,
                                   const ResolventOptions& opts) {
  const auto& att = g.attachments();
  const auto n = static_cast<Eigen::Index>(att.size());
  if (f.leads.size() != att.size())
    throw StructuralError("lead function has " + std::to_string(f.leads.size()) + " components, graph has " +
                          std::to_string(att.size()) + " leads");

  cplx k = branch_k(lambda, opts.lambda_floor);
  if (sheet == Sheet::Physical && lambda.imag() < 0.0) k = -k;

  const InteriorSolver solver(g, lambda);
  if (solver.near_singular()) throw NearSingular(lambda, solver.relative_sigma_min());

  ResolventSample s;
  s.lambda = lambda;
  s.k = k;
  s.dtn = dtn_matrix(solver, g).matrix;
  s.g = robin_data(solver, g, f.interior).g;

  std::vector<NeumannResolvent> lead_res;
  lead_res.reserve(att.size());
  CVector rf0(n), drf0(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    lead_res.emplace_back(f.leads.components[static_cast<std::size_t>(j)], k);
    rf0(j) = lead_res.back().at_zero();
    drf0(j) = lead_res.back().derivative(0.0);
  }

  s.A = robin_coefficient(s.dtn, s.g, rf0, k, opts.formula);
  s.u1_at_zero = rf0 - kI * s.A;
  const InteriorSolution u0 = solver.solve(s.u1_at_zero, f.interior);

  // (u0, f0)
  cplx value = 0.0;
  for (const auto& [edge_id, fe] : f.interior) {
    if (fe.empty()) continue;
    value += lead_inner_product([&](double x) { return trace(u0, g, edge_id, x).first; }, fe, k);
  }
  // (u1, f1) = (r f1, f1) - i (e^{ikx} A, f1)
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& fj = f.leads.components[static_cast<std::size_t>(j)];
    if (fj.empty()) continue;
    const NeumannResolvent& rj = lead_res[static_cast<std::size_t>(j)];
    value += lead_inner_product([&](double x) { return rj.value(x); }, fj, k);
    value += -kI * s.A(j) * lead_inner_product([&](double x) { return std::exp(kI * k * x); }, fj, k);
  }
  s.value = value;

  const CVector du1 = drf0 + k * s.A;
  const CVector nu0 = normal_derivative(u0, g);
  CVector u0b(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const BoundaryAttachment& a = att[static_cast<std::size_t>(b)];
    const Edge& e = g.edges()[a.edge_index];
    u0b(b) = trace(u0, g, e.id, a.end == Endpoint::Start ? 0.0 : e.length).first;
  }
  s.robin_residual = (du1 - s.dtn * s.u1_at_zero - s.g).norm();
  s.trace_residual = (u0b - s.u1_at_zero).norm();
  s.vertex_residual = (du1 - nu0).norm();
  s.scale = std::max(1.0, std::abs(k) * s.A.norm() + s.dtn.norm() * s.u1_at_zero.norm() + s.g.norm());
  const double tol = opts.res_tol * s.scale;
  s.valid = s.robin_residual <= tol && s.trace_residual <= tol && s.vertex_residual <= tol;
  return s;
}

ResolventSample solve_full(const MetricGraph& g, const CompositeFunction& f, cplx lambda,
                           const ResolventOptions& opts) {
  return evaluate_resolvent(g, f, lambda, Sheet::Physical, opts);
}

ResolventSample continue_value(const MetricGraph& g, const CompositeFunction& f, cplx lambda,
                               const ResolventOptions& opts) {
  return evaluate_resolvent(g, f, lambda, Sheet::Continued, opts);
}

}  // namespace qgraph
