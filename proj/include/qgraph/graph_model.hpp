#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/types.hpp"

namespace qgraph {

enum class SlotKind : int { Edge = 0, Lead = 1 };
enum class Endpoint : int { Start = 0, End = 1 };

/// One edge-end incident to a vertex. Slots order lexicographically by
/// (kind, id, endpoint): finite edges first, then leads.
struct Slot {
  SlotKind kind = SlotKind::Edge;
  int id = 0;
  Endpoint end = Endpoint::Start;

  auto operator<=>(const Slot&) const = default;
};

/// A_v f(v) + B_v f'(v) = 0 with f, f' ordered by `edge_order`.
/// Derivatives are outgoing: +u'(0) at the start of an edge, -u'(l) at its end.
struct VertexCondition {
  int degree = 0;
  CMatrix A;
  CMatrix B;
  std::vector<Slot> edge_order;
};

enum class ConditionKind { Standard, Dirichlet, Neumann, Delta, General };

/// How a vertex condition was specified, before the degree is known.
struct ConditionSpec {
  ConditionKind kind = ConditionKind::Standard;
  double strength = 0.0;  // Delta only
  CMatrix A;              // General only
  CMatrix B;              // General only
};

inline constexpr double kRankTol = 1e-10;
inline constexpr double kHermitTol = 1e-10;

enum class ConditionFailure { None, Rank, Hermitian, EdgeOrder };

struct ConditionReport {
  bool ok = true;
  ConditionFailure failure = ConditionFailure::None;
  double defect = 0.0;  // rank gap (relative sigma_min) or Hermitian defect norm
  std::string message;
};

/// Checks rank(A B) = d and A B* Hermitian. Shape mismatches throw StructuralError.
ConditionReport validate_condition(const VertexCondition& cond);

/// d-1 continuity rows in A and one Kirchhoff row of ones in B.
VertexCondition standard_condition(int degree);
VertexCondition dirichlet_condition(int degree);
VertexCondition neumann_condition(int degree);
/// Continuity plus sum of outgoing derivatives = strength * f(v).
VertexCondition delta_condition(int degree, double strength);

/// Materializes a spec for a given degree. General specs must match it.
VertexCondition make_condition(const ConditionSpec& spec, int degree);

/// True when (A, B) defines the same Lagrangian subspace as (A2, B2).
bool equivalent_conditions(const CMatrix& A, const CMatrix& B, const CMatrix& A2, const CMatrix& B2);

struct Vertex {
  int id = 0;
  ConditionSpec spec;
  VertexCondition condition;
};

/// Finite edge with coordinate x in [0, length], x = 0 at `from`.
struct Edge {
  int id = 0;
  int from = 0;
  int to = 0;
  double length = 1.0;
};

/// Half-line [0, inf) attached at `vertex` (x = 0).
struct Lead {
  int id = 0;
  int vertex = 0;
};

/// Record of a lead that normalize_boundary split into a new edge + new boundary vertex.
struct LeadSplit {
  int lead = 0;
  int new_edge = 0;
  int new_vertex = 0;
  double offset = 0.0;
};

/// Where a boundary vertex of a normalized graph touches its unique finite edge.
struct BoundaryAttachment {
  int vertex = 0;
  int lead = 0;
  std::size_t edge_index = 0;
  Endpoint end = Endpoint::Start;
};

class MetricGraph {
public:
  class Builder {
  public:
    Builder& add_vertex(int id, ConditionSpec spec = {});
    Builder& add_edge(int id, int from, int to, double length);
    Builder& add_lead(int id, int vertex);
    Builder& record_split(LeadSplit split);
    /// Validates structure and admissibility; throws StructuralError / InvariantViolation.
    MetricGraph build() const;

  private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<Lead> leads_;
    std::vector<LeadSplit> splits_;
  };

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Lead>& leads() const { return leads_; }
  const std::vector<LeadSplit>& splits() const { return splits_; }

  /// Vertex ids carrying at least one lead, ascending. Index in this list = boundary index.
  const std::vector<int>& boundary() const { return boundary_; }
  std::size_t boundary_size() const { return boundary_.size(); }
  /// -1 when the vertex is not a boundary vertex.
  int boundary_index(int vertex_id) const;

  const Vertex& vertex(int id) const;
  const Edge& edge(int id) const;
  std::size_t vertex_index(int id) const;
  std::size_t edge_index(int id) const;
  std::optional<std::size_t> find_edge(int id) const;
  std::optional<std::size_t> find_lead(int id) const;

  /// Every boundary vertex has degree 2 (one non-loop finite edge + one lead) and
  /// carries a condition equivalent to the standard one.
  bool is_normalized() const { return normalized_; }
  /// Throws StructuralError on non-normalized graphs.
  const std::vector<BoundaryAttachment>& attachments() const;

  double min_edge_length() const;
  double max_edge_length() const;

private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Lead> leads_;
  std::vector<LeadSplit> splits_;
  std::vector<int> boundary_;
  std::map<int, std::size_t> vertex_pos_;
  std::map<int, std::size_t> edge_pos_;
  std::map<int, std::size_t> lead_pos_;
  std::vector<BoundaryAttachment> attachments_;
  bool normalized_ = false;
};

/// Splits every lead whose attachment vertex is not already in boundary normal form
/// at distance `offset`, creating a standard degree-2 vertex as the new boundary point.
/// New vertex and edge ids continue after the current maxima in lead-id order.
MetricGraph normalize_boundary(const MetricGraph& g, double offset);

}  // namespace qgraph
