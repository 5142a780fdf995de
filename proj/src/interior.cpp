#include "qgraph/interior.hpp"

#include <algorithm>
#include <cmath>

#include "qgraph/errors.hpp"
#include "qgraph/quadrature.hpp"

namespace qgraph {

FundamentalValues eval_fundamental(double x, cplx lambda) {
  FundamentalValues v;
  if (std::abs(lambda) * x * x < kSeriesThreshold) {
    // 12-term Taylor series of cos(kx) and sin(kx)/k in z = -lambda x^2.
    const cplx z = -lambda * x * x;
    cplx term_c = 1.0, term_s = 1.0;
    cplx c = 0.0, s = 0.0;
    for (int j = 0; j < 12; ++j) {
      c += term_c;
      s += term_s;
      term_c *= z / static_cast<double>((2 * j + 1) * (2 * j + 2));
      term_s *= z / static_cast<double>((2 * j + 2) * (2 * j + 3));
    }
    v.c = c;
    v.s = x * s;
  } else {
    const cplx k = std::sqrt(lambda);
    v.c = std::cos(k * x);
    v.s = std::sin(k * x) / k;
  }
  v.dc = -lambda * v.s;
  v.ds = v.c;
  return v;
}

// ---------------------------------------------------------------------------
// Particular solution by Cauchy-data propagation across Gauss panels.

ParticularSolution::ParticularSolution(const EdgeForcing& f, cplx lambda) : forcing_(f), lambda_(lambda) {
  if (f.empty()) return;
  const double max_len = max_panel_length(std::sqrt(lambda));
  breaks_.push_back(0.0);
  double cursor = 0.0;
  for (std::size_t p = 0; p < f.pieces().size(); ++p) {
    const PolyPiece& piece = f.pieces()[p];
    if (piece.x0 > cursor) {
      breaks_.push_back(piece.x0);
      piece_.push_back(-1);
    }
    const auto br = panel_breaks(piece.x0, piece.x1, std::min(max_len, piece.x1 - piece.x0));
    for (std::size_t j = 1; j < br.size(); ++j) {
      breaks_.push_back(br[j]);
      piece_.push_back(static_cast<int>(p));
    }
    cursor = piece.x1;
  }

  const GaussLegendre& rule = panel_rule();
  u_.assign(breaks_.size(), 0.0);
  du_.assign(breaks_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < breaks_.size(); ++j) {
    const double a = breaks_[j], b = breaks_[j + 1];
    const FundamentalValues fv = eval_fundamental(b - a, lambda);
    cplx u = u_[j] * fv.c + du_[j] * fv.s;
    cplx du = u_[j] * fv.dc + du_[j] * fv.ds;
    if (piece_[j] >= 0) {
      const PolyPiece& piece = f.pieces()[piece_[j]];
      cplx is = 0.0, ic = 0.0;
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (int q = 0; q < rule.order(); ++q) {
        const double t = mid + half * rule.nodes()[q];
        const FundamentalValues kt = eval_fundamental(b - t, lambda);
        const cplx ft = piece.value(t) * (rule.weights()[q] * half);
        is += kt.s * ft;
        ic += kt.c * ft;
      }
      u -= is;
      du -= ic;
    }
    u_[j + 1] = u;
    du_[j + 1] = du;
  }
}

std::pair<cplx, cplx> ParticularSolution::value(double x) const {
  if (breaks_.empty() || x <= 0.0) return {0.0, 0.0};
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  const double a = breaks_[j];
  const FundamentalValues fv = eval_fundamental(x - a, lambda_);
  cplx u = u_[j] * fv.c + du_[j] * fv.s;
  cplx du = u_[j] * fv.dc + du_[j] * fv.ds;
  if (j < piece_.size() && piece_[j] >= 0 && x > a) {
    const PolyPiece& piece = forcing_.pieces()[piece_[j]];
    const GaussLegendre& rule = panel_rule();
    const double half = 0.5 * (x - a), mid = 0.5 * (a + x);
    for (int q = 0; q < rule.order(); ++q) {
      const double t = mid + half * rule.nodes()[q];
      const FundamentalValues kt = eval_fundamental(x - t, lambda_);
      const cplx ft = piece.value(t) * (rule.weights()[q] * half);
      u -= kt.s * ft;
      du -= kt.c * ft;
    }
  }
  return {u, du};
}

// ---------------------------------------------------------------------------
// Assembly

namespace {

/// Replaces (A B) by a row-orthonormal basis of its row space.
CMatrix orthonormal_condition_rows(const VertexCondition& c) {
  CMatrix AB(c.degree, 2 * c.degree);
  AB << c.A, c.B;
  Eigen::JacobiSVD<CMatrix> svd(AB, Eigen::ComputeFullV);
  return svd.matrixV().leftCols(c.degree).adjoint();
}

struct EdgeEndData {
  FundamentalValues at_end;
  std::pair<cplx, cplx> particular_end{0.0, 0.0};
};

const EdgeForcing* find_forcing(const InteriorForcing& f0, int edge_id) {
  auto it = f0.find(edge_id);
  return it == f0.end() ? nullptr : &it->second;
}

void check_forcing(const MetricGraph& g, const InteriorForcing& f0) {
  for (const auto& [id, f] : f0) {
    if (!g.find_edge(id)) throw StructuralError("forcing given for unknown edge " + std::to_string(id));
    f.check_domain(g.edge(id).length);
  }
}

}  // namespace

InteriorSystem assemble_interior(const MetricGraph& g, cplx lambda, const CVector& phi,
                                 const InteriorForcing& f0) {
  const auto& att = g.attachments();
  const auto n = static_cast<Eigen::Index>(g.boundary_size());
  if (phi.size() != n)
    throw StructuralError("boundary data has size " + std::to_string(phi.size()) + ", expected " +
                          std::to_string(n));
  check_forcing(g, f0);

  const auto& edges = g.edges();
  const auto dim = static_cast<Eigen::Index>(2 * edges.size());
  InteriorSystem sys;
  sys.M = CMatrix::Zero(dim, dim);
  sys.rhs = CVector::Zero(dim);
  sys.boundary_rows.assign(att.size(), 0);

  std::vector<EdgeEndData> ends(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    ends[e].at_end = eval_fundamental(edges[e].length, lambda);
    if (const EdgeForcing* f = find_forcing(f0, edges[e].id); f && !f->empty())
      ends[e].particular_end = ParticularSolution(*f, lambda).value(edges[e].length);
  }

  // Value and outgoing derivative at a slot as (coefficient on alpha, on beta, known part).
  struct SlotRow {
    Eigen::Index col;
    cplx va, vb, vp;
    cplx da, db, dp;
  };
  auto slot_row = [&](const Slot& s) {
    const std::size_t e = g.edge_index(s.id);
    SlotRow r{};
    r.col = static_cast<Eigen::Index>(2 * e);
    if (s.end == Endpoint::Start) {
      r.va = 1.0;
      r.db = 1.0;
    } else {
      const auto& fv = ends[e].at_end;
      const auto& [up, dup] = ends[e].particular_end;
      r.va = fv.c;
      r.vb = fv.s;
      r.vp = up;
      r.da = -fv.dc;
      r.db = -fv.ds;
      r.dp = -dup;
    }
    return r;
  };

  Eigen::Index row = 0;
  for (const Vertex& v : g.vertices()) {
    const int b = g.boundary_index(v.id);
    if (b >= 0) {
      const BoundaryAttachment& a = att[static_cast<std::size_t>(b)];
      const Slot s{SlotKind::Edge, g.edges()[a.edge_index].id, a.end};
      const SlotRow r = slot_row(s);
      sys.M(row, r.col) += r.va;
      sys.M(row, r.col + 1) += r.vb;
      sys.rhs(row) = phi(b) - r.vp;
      sys.boundary_rows[static_cast<std::size_t>(b)] = row;
      ++row;
      continue;
    }
    const CMatrix W = orthonormal_condition_rows(v.condition);
    const int d = v.condition.degree;
    for (int j = 0; j < d; ++j) {
      const SlotRow r = slot_row(v.condition.edge_order[static_cast<std::size_t>(j)]);
      for (int i = 0; i < d; ++i) {
        const cplx a = W(i, j), bcoef = W(i, d + j);
        sys.M(row + i, r.col) += a * r.va + bcoef * r.da;
        sys.M(row + i, r.col + 1) += a * r.vb + bcoef * r.db;
        sys.rhs(row + i) -= a * r.vp + bcoef * r.dp;
      }
    }
    row += d;
  }
  if (row != dim) throw StructuralError("interior system is not square; is the graph normalized?");
  return sys;
}

// ---------------------------------------------------------------------------

InteriorSolver::InteriorSolver(const MetricGraph& g, cplx lambda)
    : graph_(&g),
      lambda_(lambda),
      system_(assemble_interior(g, lambda, CVector::Zero(static_cast<Eigen::Index>(g.boundary_size())))),
      svd_(system_.M, Eigen::ComputeFullU | Eigen::ComputeFullV) {
  const auto& sv = svd_.singularValues();
  if (sv.size() > 0) {
    norm_ = sv(0);
    sigma_min_ = sv(sv.size() - 1);
  }
}

InteriorSolution InteriorSolver::solve(const CVector& phi, const InteriorForcing& f0) const {
  if (near_singular()) throw NearSingular(lambda_, relative_sigma_min());
  const InteriorSystem sys = f0.empty() ? InteriorSystem{} : assemble_interior(*graph_, lambda_, phi, f0);
  CVector rhs;
  if (f0.empty()) {
    if (phi.size() != static_cast<Eigen::Index>(graph_->boundary_size()))
      throw StructuralError("boundary data has wrong size");
    rhs = CVector::Zero(system_.M.rows());
    for (std::size_t b = 0; b < system_.boundary_rows.size(); ++b)
      rhs(system_.boundary_rows[b]) = phi(static_cast<Eigen::Index>(b));
  } else {
    rhs = sys.rhs;
  }
  const CVector coeffs = svd_.solve(rhs);

  InteriorSolution sol;
  sol.lambda = lambda_;
  const auto& edges = graph_->edges();
  sol.edges.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    sol.edges[e].alpha = coeffs(static_cast<Eigen::Index>(2 * e));
    sol.edges[e].beta = coeffs(static_cast<Eigen::Index>(2 * e + 1));
    if (auto it = f0.find(edges[e].id); it != f0.end() && !it->second.empty())
      sol.edges[e].particular = ParticularSolution(it->second, lambda_);
  }
  return sol;
}

CMatrix InteriorSolver::solve_boundary(const CMatrix& phi_columns) const {
  if (near_singular()) throw NearSingular(lambda_, relative_sigma_min());
  CMatrix rhs = CMatrix::Zero(system_.M.rows(), phi_columns.cols());
  for (std::size_t b = 0; b < system_.boundary_rows.size(); ++b)
    rhs.row(system_.boundary_rows[b]) = phi_columns.row(static_cast<Eigen::Index>(b));
  return svd_.solve(rhs);
}

InteriorSolution solve_interior(const MetricGraph& g, cplx lambda, const CVector& phi,
                                const InteriorForcing& f0) {
  return InteriorSolver(g, lambda).solve(phi, f0);
}

std::pair<cplx, cplx> trace_coefficients(cplx alpha, cplx beta, double x, cplx lambda) {
  const FundamentalValues fv = eval_fundamental(x, lambda);
  return {alpha * fv.c + beta * fv.s, alpha * fv.dc + beta * fv.ds};
}

std::pair<cplx, cplx> trace(const InteriorSolution& sol, const MetricGraph& g, int edge_id, double x) {
  const std::size_t e = g.edge_index(edge_id);
  const double len = g.edges()[e].length;
  if (!(x >= 0.0 && x <= len * (1.0 + 1e-14)))
    throw StructuralError("trace coordinate " + std::to_string(x) + " outside [0, " + std::to_string(len) +
                          "] on edge " + std::to_string(edge_id));
  const EdgeSolution& es = sol.edges.at(e);
  auto [u, du] = trace_coefficients(es.alpha, es.beta, x, sol.lambda);
  if (!es.particular.is_zero()) {
    const auto [up, dup] = es.particular.value(x);
    u += up;
    du += dup;
  }
  return {u, du};
}

}  // namespace qgraph
