#include "qgraph/graph_model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

std::string vertex_label(int id) { return "vertex " + std::to_string(id); }

CMatrix concat(const CMatrix& A, const CMatrix& B) {
  CMatrix AB(A.rows(), A.cols() + B.cols());
  AB << A, B;
  return AB;
}

}  // namespace

ConditionReport validate_condition(const VertexCondition& cond) {
  const auto d = static_cast<Eigen::Index>(cond.degree);
  if (cond.degree < 1) throw StructuralError("vertex condition degree must be >= 1");
  if (cond.A.rows() != d || cond.A.cols() != d || cond.B.rows() != d || cond.B.cols() != d) {
    std::ostringstream os;
    os << "condition matrices must be " << d << "x" << d << ", got A " << cond.A.rows() << "x"
       << cond.A.cols() << " and B " << cond.B.rows() << "x" << cond.B.cols();
    throw StructuralError(os.str());
  }

  ConditionReport report;
  if (!cond.edge_order.empty()) {
    std::set<Slot> unique(cond.edge_order.begin(), cond.edge_order.end());
    if (cond.edge_order.size() != static_cast<std::size_t>(d) || unique.size() != cond.edge_order.size()) {
      report.ok = false;
      report.failure = ConditionFailure::EdgeOrder;
      report.defect = static_cast<double>(cond.edge_order.size()) - static_cast<double>(unique.size());
      report.message = "edge_order must list each of the " + std::to_string(d) +
                       " incident edge ends exactly once";
      return report;
    }
  }

  Eigen::JacobiSVD<CMatrix> svd(concat(cond.A, cond.B));
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smax == 0.0 || smin <= kRankTol * smax) {
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (smax > 0.0 && sv(i) > kRankTol * smax) ++rank;
    report.ok = false;
    report.failure = ConditionFailure::Rank;
    report.defect = smax > 0.0 ? smin / smax : 0.0;
    report.message = "rank(A B) = " + std::to_string(rank) + " < " + std::to_string(d);
    return report;
  }

  const CMatrix ab = cond.A * cond.B.adjoint();
  const double defect = (ab - ab.adjoint()).norm();
  const double tol = kHermitTol * std::max(1.0, cond.A.norm() * cond.B.norm());
  if (defect > tol) {
    report.ok = false;
    report.failure = ConditionFailure::Hermitian;
    report.defect = defect;
    std::ostringstream os;
    os << "A B* is not Hermitian (defect " << defect << ")";
    report.message = os.str();
  }
  return report;
}

VertexCondition standard_condition(int degree) {
  if (degree < 1) throw StructuralError("standard condition needs degree >= 1");
  VertexCondition c;
  c.degree = degree;
  c.A = CMatrix::Zero(degree, degree);
  c.B = CMatrix::Zero(degree, degree);
  for (int r = 0; r + 1 < degree; ++r) {
    c.A(r, r) = 1.0;
    c.A(r, r + 1) = -1.0;
  }
  c.B.row(degree - 1).setOnes();
  return c;
}

VertexCondition dirichlet_condition(int degree) {
  if (degree < 1) throw StructuralError("dirichlet condition needs degree >= 1");
  VertexCondition c;
  c.degree = degree;
  c.A = CMatrix::Identity(degree, degree);
  c.B = CMatrix::Zero(degree, degree);
  return c;
}

VertexCondition neumann_condition(int degree) {
  if (degree < 1) throw StructuralError("neumann condition needs degree >= 1");
  VertexCondition c;
  c.degree = degree;
  c.A = CMatrix::Zero(degree, degree);
  c.B = CMatrix::Identity(degree, degree);
  return c;
}

VertexCondition delta_condition(int degree, double strength) {
  VertexCondition c = standard_condition(degree);
  c.A(degree - 1, 0) = -strength;
  return c;
}

VertexCondition make_condition(const ConditionSpec& spec, int degree) {
  switch (spec.kind) {
    case ConditionKind::Standard: return standard_condition(degree);
    case ConditionKind::Dirichlet: return dirichlet_condition(degree);
    case ConditionKind::Neumann: return neumann_condition(degree);
    case ConditionKind::Delta: return delta_condition(degree, spec.strength);
    case ConditionKind::General: break;
  }
  if (spec.A.rows() != degree || spec.A.cols() != degree || spec.B.rows() != degree ||
      spec.B.cols() != degree) {
    std::ostringstream os;
    os << "general condition matrices must be " << degree << "x" << degree << " (vertex degree)";
    throw StructuralError(os.str());
  }
  VertexCondition c;
  c.degree = degree;
  c.A = spec.A;
  c.B = spec.B;
  return c;
}

bool equivalent_conditions(const CMatrix& A, const CMatrix& B, const CMatrix& A2, const CMatrix& B2) {
  if (A.rows() != A2.rows()) return false;
  CMatrix stacked(A.rows() * 2, A.cols() * 2);
  stacked << A, B, A2, B2;
  Eigen::JacobiSVD<CMatrix> svd(stacked);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * smax) ++rank;
  return rank == A.rows();
}

// ---------------------------------------------------------------------------
// Builder

MetricGraph::Builder& MetricGraph::Builder::add_vertex(int id, ConditionSpec spec) {
  Vertex v;
  v.id = id;
  v.spec = std::move(spec);
  vertices_.push_back(std::move(v));
  return *this;
}

MetricGraph::Builder& MetricGraph::Builder::add_edge(int id, int from, int to, double length) {
  edges_.push_back(Edge{id, from, to, length});
  return *this;
}

MetricGraph::Builder& MetricGraph::Builder::add_lead(int id, int vertex) {
  leads_.push_back(Lead{id, vertex});
  return *this;
}

MetricGraph::Builder& MetricGraph::Builder::record_split(LeadSplit split) {
  splits_.push_back(split);
  return *this;
}

MetricGraph MetricGraph::Builder::build() const {
  MetricGraph g;
  g.vertices_ = vertices_;
  g.edges_ = edges_;
  g.leads_ = leads_;
  g.splits_ = splits_;
  std::sort(g.vertices_.begin(), g.vertices_.end(), [](auto& a, auto& b) { return a.id < b.id; });
  std::sort(g.edges_.begin(), g.edges_.end(), [](auto& a, auto& b) { return a.id < b.id; });
  std::sort(g.leads_.begin(), g.leads_.end(), [](auto& a, auto& b) { return a.id < b.id; });

  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    if (!g.vertex_pos_.emplace(g.vertices_[i].id, i).second)
      throw StructuralError("duplicate vertex id " + std::to_string(g.vertices_[i].id));
  }
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const Edge& e = g.edges_[i];
    if (!g.edge_pos_.emplace(e.id, i).second)
      throw StructuralError("duplicate edge id " + std::to_string(e.id));
    if (!(e.length > 0.0)) throw StructuralError("edge " + std::to_string(e.id) + ": length must be > 0");
    if (!g.vertex_pos_.count(e.from) || !g.vertex_pos_.count(e.to))
      throw StructuralError("edge " + std::to_string(e.id) + ": endpoint is not a declared vertex");
  }
  for (std::size_t i = 0; i < g.leads_.size(); ++i) {
    const Lead& l = g.leads_[i];
    if (!g.lead_pos_.emplace(l.id, i).second)
      throw StructuralError("duplicate lead id " + std::to_string(l.id));
    if (!g.vertex_pos_.count(l.vertex))
      throw StructuralError("lead " + std::to_string(l.id) + ": vertex " + std::to_string(l.vertex) +
                            " is not declared");
  }

  std::map<int, std::vector<Slot>> slots;
  for (const Edge& e : g.edges_) {
    slots[e.from].push_back(Slot{SlotKind::Edge, e.id, Endpoint::Start});
    slots[e.to].push_back(Slot{SlotKind::Edge, e.id, Endpoint::End});
  }
  for (const Lead& l : g.leads_) slots[l.vertex].push_back(Slot{SlotKind::Lead, l.id, Endpoint::Start});

  for (Vertex& v : g.vertices_) {
    auto& s = slots[v.id];
    std::sort(s.begin(), s.end());
    if (s.empty()) throw StructuralError(vertex_label(v.id) + " has no incident edges or leads");
    v.condition = make_condition(v.spec, static_cast<int>(s.size()));
    v.condition.edge_order = s;
    const ConditionReport rep = validate_condition(v.condition);
    if (!rep.ok) throw InvariantViolation(rep.message + " at vertex " + std::to_string(v.id), v.id);
  }

  std::set<int> bset;
  for (const Lead& l : g.leads_) bset.insert(l.vertex);
  g.boundary_.assign(bset.begin(), bset.end());

  g.normalized_ = true;
  for (int vid : g.boundary_) {
    const Vertex& v = g.vertex(vid);
    const auto& s = v.condition.edge_order;
    const bool shape_ok = s.size() == 2 && s[0].kind == SlotKind::Edge && s[1].kind == SlotKind::Lead;
    if (!shape_ok) {
      g.normalized_ = false;
      break;
    }
    const Edge& e = g.edge(s[0].id);
    const VertexCondition std2 = standard_condition(2);
    if (e.from == e.to || !equivalent_conditions(v.condition.A, v.condition.B, std2.A, std2.B)) {
      g.normalized_ = false;
      break;
    }
    g.attachments_.push_back(BoundaryAttachment{vid, s[1].id, g.edge_index(e.id), s[0].end});
  }
  if (!g.normalized_) g.attachments_.clear();
  return g;
}

// ---------------------------------------------------------------------------
// Accessors

int MetricGraph::boundary_index(int vertex_id) const {
  auto it = std::lower_bound(boundary_.begin(), boundary_.end(), vertex_id);
  if (it == boundary_.end() || *it != vertex_id) return -1;
  return static_cast<int>(it - boundary_.begin());
}

std::size_t MetricGraph::vertex_index(int id) const {
  auto it = vertex_pos_.find(id);
  if (it == vertex_pos_.end()) throw StructuralError("unknown vertex " + std::to_string(id));
  return it->second;
}

std::size_t MetricGraph::edge_index(int id) const {
  auto it = edge_pos_.find(id);
  if (it == edge_pos_.end()) throw StructuralError("unknown edge " + std::to_string(id));
  return it->second;
}

std::optional<std::size_t> MetricGraph::find_edge(int id) const {
  auto it = edge_pos_.find(id);
  if (it == edge_pos_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MetricGraph::find_lead(int id) const {
  auto it = lead_pos_.find(id);
  if (it == lead_pos_.end()) return std::nullopt;
  return it->second;
}

const Vertex& MetricGraph::vertex(int id) const { return vertices_[vertex_index(id)]; }
const Edge& MetricGraph::edge(int id) const { return edges_[edge_index(id)]; }

const std::vector<BoundaryAttachment>& MetricGraph::attachments() const {
  if (!normalized_) throw StructuralError("graph is not in boundary normal form; call normalize_boundary");
  return attachments_;
}

double MetricGraph::min_edge_length() const {
  double m = 0.0;
  for (const Edge& e : edges_) m = (m == 0.0) ? e.length : std::min(m, e.length);
  return m;
}

double MetricGraph::max_edge_length() const {
  double m = 0.0;
  for (const Edge& e : edges_) m = std::max(m, e.length);
  return m;
}

// ---------------------------------------------------------------------------

MetricGraph normalize_boundary(const MetricGraph& g, double offset) {
  if (!(offset > 0.0)) throw StructuralError("normalization offset must be > 0");
  if (g.is_normalized()) return g;

  // Vertices already in normal form keep their leads.
  std::set<int> keep;
  for (int vid : g.boundary()) {
    const Vertex& v = g.vertex(vid);
    const auto& s = v.condition.edge_order;
    if (s.size() != 2 || s[0].kind != SlotKind::Edge || s[1].kind != SlotKind::Lead) continue;
    const Edge& e = g.edge(s[0].id);
    const VertexCondition std2 = standard_condition(2);
    if (e.from != e.to && equivalent_conditions(v.condition.A, v.condition.B, std2.A, std2.B))
      keep.insert(vid);
  }

  int next_vertex = 0;
  for (const Vertex& v : g.vertices()) next_vertex = std::max(next_vertex, v.id + 1);
  int next_edge = 0;
  for (const Edge& e : g.edges()) next_edge = std::max(next_edge, e.id + 1);

  MetricGraph::Builder b;
  for (const Vertex& v : g.vertices()) b.add_vertex(v.id, v.spec);
  for (const Edge& e : g.edges()) b.add_edge(e.id, e.from, e.to, e.length);
  for (const LeadSplit& s : g.splits()) b.record_split(s);

  // Leads are sorted by id, so the new edge ids replace lead slots in the same
  // relative order and existing condition matrices keep their meaning.
  for (const Lead& l : g.leads()) {
    if (keep.count(l.vertex)) {
      b.add_lead(l.id, l.vertex);
      continue;
    }
    const int w = next_vertex++;
    const int e = next_edge++;
    b.add_vertex(w, ConditionSpec{});
    b.add_edge(e, l.vertex, w, offset);
    b.add_lead(l.id, w);
    b.record_split(LeadSplit{l.id, e, w, offset});
  }
  MetricGraph out = b.build();
  if (!out.is_normalized()) throw StructuralError("normalization failed to reach boundary normal form");
  return out;
}

}  // namespace qgraph
