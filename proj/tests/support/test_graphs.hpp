#pragma once

#include <random>
#include <vector>

#include <Eigen/QR>

#include "qgraph/graph_model.hpp"
#include "qgraph/halfline.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/resolvent.hpp"

namespace fixtures {

using qgraph::CMatrix;
using qgraph::cplx;
using qgraph::kPi;
using qgraph::MetricGraph;

/// Edge [0, l] from vertex 0 (lead, standard) to vertex 1 (Dirichlet).
inline MetricGraph interval_lead(double l) {
  MetricGraph::Builder b;
  b.add_vertex(0).add_vertex(1, {qgraph::ConditionKind::Dirichlet}).add_edge(1, 0, 1, l).add_lead(1, 0);
  return b.build();
}

/// Edge [0, l] with a lead at both ends: the real line.
inline MetricGraph full_line(double l = 2.0) {
  MetricGraph::Builder b;
  b.add_vertex(0).add_vertex(1).add_edge(1, 0, 1, l).add_lead(1, 0).add_lead(2, 1);
  return b.build();
}

/// Star with a standard center 0 and outer vertices 1..3 carrying leads.
inline MetricGraph three_star(double l1 = 1.0, double l2 = 1.0, double l3 = 1.0) {
  MetricGraph::Builder b;
  b.add_vertex(0).add_vertex(1).add_vertex(2).add_vertex(3);
  b.add_edge(1, 0, 1, l1).add_edge(2, 0, 2, l2).add_edge(3, 0, 3, l3);
  b.add_lead(1, 1).add_lead(2, 2).add_lead(3, 3);
  return b.build();
}

/// Loop of length 2 pi at vertex 0 plus one lead, before normalization.
inline MetricGraph lasso_raw() {
  MetricGraph::Builder b;
  b.add_vertex(0).add_edge(1, 0, 0, 2.0 * kPi).add_lead(1, 0);
  return b.build();
}

/// Lasso with the lead split at `stem`: loop edge 1, stem edge 2 (0 -> 1).
inline MetricGraph lasso(double stem = 1.0) { return qgraph::normalize_boundary(lasso_raw(), stem); }

/// Random unitary from the QR factor of a seeded Gaussian matrix.
inline CMatrix random_unitary(int d, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix Z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Z(i, j) = cplx(n(rng), n(rng));
  Eigen::HouseholderQR<CMatrix> qr(Z);
  return qr.householderQ() * CMatrix::Identity(d, d);
}

/// Admissible pair A = U - I, B = i (U + I).
inline qgraph::ConditionSpec unitary_condition(const CMatrix& U) {
  const auto d = U.rows();
  qgraph::ConditionSpec s;
  s.kind = qgraph::ConditionKind::General;
  s.A = U - CMatrix::Identity(d, d);
  s.B = cplx(0, 1) * (U + CMatrix::Identity(d, d));
  return s;
}

/// Five edges, general conditions at the three core vertices, leads at 3 and 4.
inline MetricGraph random5(unsigned seed = 7) {
  std::mt19937 rng(seed);
  MetricGraph::Builder b;
  b.add_vertex(0, unitary_condition(random_unitary(3, rng)));
  b.add_vertex(1, unitary_condition(random_unitary(2, rng)));
  b.add_vertex(2, unitary_condition(random_unitary(3, rng)));
  b.add_vertex(3).add_vertex(4);
  b.add_edge(1, 0, 1, 1.3).add_edge(2, 1, 2, 0.8).add_edge(3, 2, 0, 1.1).add_edge(4, 0, 3, 0.9).add_edge(5, 2, 4, 1.7);
  b.add_lead(1, 3).add_lead(2, 4);
  return b.build();
}

/// Path 0 -e1(1.0)- 1 -e2(1.7)- 2 with a delta vertex in the middle and leads at both ends.
inline MetricGraph asym2() {
  MetricGraph::Builder b;
  qgraph::ConditionSpec delta{qgraph::ConditionKind::Delta, 0.8, {}, {}};
  b.add_vertex(0).add_vertex(1, delta).add_vertex(2);
  b.add_edge(1, 0, 1, 1.0).add_edge(2, 1, 2, 1.7).add_lead(1, 0).add_lead(2, 2);
  return b.build();
}

inline qgraph::PiecewisePolynomial piece(double x0, double x1, std::vector<cplx> c) {
  return qgraph::PiecewisePolynomial({qgraph::PolyPiece{x0, x1, qgraph::Polynomial(std::move(c))}});
}

/// 16 y^2 (w - y)^2 / w^4 on [x0, x0 + w]: a C1 bump with peak 1.
inline qgraph::PiecewisePolynomial bump(double x0, double w) {
  const double s = 16.0 / (w * w * w * w);
  return piece(x0, x0 + w, {0.0, 0.0, s * w * w, -2.0 * s * w, s});
}

/// Empty forcing with one (zero) lead component per boundary vertex.
inline qgraph::CompositeFunction zero_function(const MetricGraph& g) {
  qgraph::CompositeFunction f;
  f.leads.components.assign(g.boundary_size(), qgraph::PiecewisePolynomial{});
  return f;
}

/// The set of graphs used for corpus-wide properties.
struct NamedGraph {
  const char* name;
  MetricGraph graph;
};

inline std::vector<NamedGraph> corpus() {
  return {{"interval_1", interval_lead(1.0)},
          {"interval_pi", interval_lead(kPi)},
          {"full_line", full_line()},
          {"three_star", three_star(1.0, 1.3, 0.7)},
          {"lasso", lasso(1.0)},
          {"random5", random5()},
          {"asym2", asym2()}};
}

/// Deterministic forcing touching every edge and every lead of `g`.
inline qgraph::CompositeFunction corpus_function(const MetricGraph& g, unsigned seed = 11) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  qgraph::CompositeFunction f = zero_function(g);
  for (const auto& e : g.edges()) {
    const double a = 0.2 * e.length, w = 0.5 * e.length;
    f.interior[e.id] = bump(a, w) * cplx(u(rng), u(rng));
  }
  for (auto& c : f.leads.components) c = bump(0.3, 1.2) * cplx(u(rng), u(rng));
  return f;
}

}  // namespace fixtures
