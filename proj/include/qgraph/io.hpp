#pragma once

#include <map>
#include <string>
#include <string_view>

#include "qgraph/graph_model.hpp"
#include "qgraph/polynomial.hpp"
#include "qgraph/resolvent.hpp"

namespace qgraph {

/// Parses "re+imi", "re-imi", "re", "imi", "i", "-i". Throws ParseError (line 0) on bad input.
cplx parse_complex(std::string_view text);

/// 15 significant digits, explicit sign on the imaginary part: 1.00000000000000e+00-2.50000000000000e-01i
std::string format_complex(cplx z);
std::string format_real(double x);

/// Graph description document:
///
///   [vertex]            id, condition = standard | dirichlet | neumann | delta <s> | general,
///                       A = / B = rows separated by ';', entries by ',' (general only)
///   [edge]              id, endpoints = <from>, <to>, length
///   [lead]              id, vertex
///
/// '#' starts a comment. Errors carry 1-based line numbers.
MetricGraph parse_graph(std::string_view text);
MetricGraph load_graph(const std::string& path);
/// Inverse of parse_graph (17 significant digits, exact round trip). Split records are not kept.
std::string serialize_graph(const MetricGraph& g);

/// Raw function description keyed by the ids of the graph it was written against.
/// Pieces use the local variable y = x - x0, coefficients low to high degree:
///
///   [edge] / [lead]     id, piece = x0, x1 : c0, c1, ...   (repeatable)
struct FunctionDescription {
  std::map<int, PiecewisePolynomial> edges;
  std::map<int, PiecewisePolynomial> leads;
};

FunctionDescription parse_function(std::string_view text);
FunctionDescription load_function(const std::string& path);
std::string serialize_function(const FunctionDescription& f);

/// Maps a description onto a normalized graph: lead parts in front of a split point
/// move onto the new edge, the remainder is shifted onto the new lead.
CompositeFunction bind_function(const FunctionDescription& f, const MetricGraph& normalized);

std::string read_text_file(const std::string& path);

}  // namespace qgraph
