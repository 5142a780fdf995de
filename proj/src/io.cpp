#include "qgraph/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_double(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) throw ParseError("expected a number", 0);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError("invalid number '" + s + "'", 0);
  return v;
}

int parse_int(std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("invalid integer '" + s + "'", 0);
  return static_cast<int>(v);
}

/// One `[section]` with its key/value lines.
struct Section {
  std::string name;
  int line = 0;
  std::vector<std::tuple<std::string, std::string, int>> entries;

  const std::tuple<std::string, std::string, int>* find(const std::string& key) const {
    for (const auto& e : entries)
      if (std::get<0>(e) == key) return &e;
    return nullptr;
  }
  const std::tuple<std::string, std::string, int>& require(const std::string& key) const {
    const auto* e = find(key);
    if (!e) throw ParseError("[" + name + "] section is missing '" + key + "'", line);
    return *e;
  }
};

std::vector<Section> parse_sections(std::string_view text) {
  std::vector<Section> out;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno);
      out.push_back(Section{std::string(trim(line.substr(1, line.size() - 2))), lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", lineno);
    if (out.empty()) throw ParseError("key outside of any section", lineno);
    out.back().entries.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                                    lineno);
  }
  return out;
}

template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (e.line() > 0) throw;
    throw ParseError(e.what(), line);
  } catch (const StructuralError& e) {
    throw ParseError(e.what(), line);
  }
}

CMatrix parse_matrix(std::string_view text) {
  const auto rows = split(text, ';');
  const auto n = static_cast<Eigen::Index>(rows.size());
  CMatrix M;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto cols = split(rows[static_cast<std::size_t>(r)], ',');
    if (r == 0) M = CMatrix::Zero(n, static_cast<Eigen::Index>(cols.size()));
    if (static_cast<Eigen::Index>(cols.size()) != M.cols()) throw ParseError("matrix rows have unequal length", 0);
    for (Eigen::Index c = 0; c < M.cols(); ++c) M(r, c) = parse_complex(cols[static_cast<std::size_t>(c)]);
  }
  return M;
}

void check_keys(const Section& s, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value, line] : s.entries) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError("unknown key '" + key + "' in [" + s.name + "]", line);
  }
}

std::string exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string exact(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

PolyPiece parse_piece(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("piece needs 'x0, x1 : c0, c1, ...'", 0);
  const auto bounds = split(text.substr(0, colon), ',');
  if (bounds.size() != 2) throw ParseError("piece needs exactly two bounds", 0);
  std::vector<cplx> coeffs;
  for (auto c : split(text.substr(colon + 1), ',')) coeffs.push_back(parse_complex(c));
  return PolyPiece{parse_double(bounds[0]), parse_double(bounds[1]), Polynomial(std::move(coeffs))};
}

}  // namespace

cplx parse_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("expected a complex number", 0);
  if (s.back() != 'i') return parse_double(s);
  s.remove_suffix(1);
  std::size_t pos = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      pos = i;
      break;
    }
  }
  const std::string_view re = pos == std::string_view::npos ? std::string_view{} : s.substr(0, pos);
  const std::string_view im = pos == std::string_view::npos ? s : s.substr(pos);
  double imv;
  if (im.empty() || im == "+")
    imv = 1.0;
  else if (im == "-")
    imv = -1.0;
  else
    imv = parse_double(im);
  return {re.empty() ? 0.0 : parse_double(re), imv};
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.14e", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string format_complex(cplx z) {
  char buf[64];
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::snprintf(buf, sizeof buf, "%.14e%+.14ei", re, im);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---------------------------------------------------------------------------

MetricGraph parse_graph(std::string_view text) {
  MetricGraph::Builder b;
  std::map<int, int> vertex_line;
  for (const Section& s : parse_sections(text)) {
    if (s.name == "vertex") {
      check_keys(s, {"id", "condition", "A", "B"});
      const auto& [k, idtext, idline] = s.require("id");
      const int id = at_line(idline, [&] { return parse_int(idtext); });
      ConditionSpec spec;
      if (const auto* c = s.find("condition")) {
        const std::string& value = std::get<1>(*c);
        const int line = std::get<2>(*c);
        const auto words = split(value, ' ');
        const std::string_view kind = words.front();
        if (kind == "standard") {
          spec.kind = ConditionKind::Standard;
        } else if (kind == "dirichlet") {
          spec.kind = ConditionKind::Dirichlet;
        } else if (kind == "neumann") {
          spec.kind = ConditionKind::Neumann;
        } else if (kind == "delta") {
          spec.kind = ConditionKind::Delta;
          if (words.size() != 2) throw ParseError("delta condition needs one strength value", line);
          spec.strength = at_line(line, [&] { return parse_double(words[1]); });
        } else if (kind == "general") {
          spec.kind = ConditionKind::General;
          const auto& [ka, atext, aline] = s.require("A");
          const auto& [kb, btext, bline] = s.require("B");
          spec.A = at_line(aline, [&] { return parse_matrix(atext); });
          spec.B = at_line(bline, [&] { return parse_matrix(btext); });
          if (spec.A.rows() != spec.A.cols() || spec.B.rows() != spec.B.cols() || spec.A.rows() != spec.B.rows())
            throw ParseError("A and B must be square matrices of equal size", aline);
        } else {
          throw ParseError("unknown condition '" + std::string(kind) + "'", line);
        }
        if (spec.kind != ConditionKind::General && (s.find("A") || s.find("B")))
          throw ParseError("A/B matrices are only allowed with condition = general", line);
      }
      vertex_line[id] = s.line;
      b.add_vertex(id, std::move(spec));
    } else if (s.name == "edge") {
      check_keys(s, {"id", "endpoints", "length"});
      const auto& [k1, idtext, idline] = s.require("id");
      const auto& [k2, eptext, epline] = s.require("endpoints");
      const auto& [k3, ltext, lline] = s.require("length");
      const int id = at_line(idline, [&] { return parse_int(idtext); });
      const auto ep = split(eptext, ',');
      if (ep.size() != 2) throw ParseError("endpoints needs two vertex ids", epline);
      const int from = at_line(epline, [&] { return parse_int(ep[0]); });
      const int to = at_line(epline, [&] { return parse_int(ep[1]); });
      const double len = at_line(lline, [&] { return parse_double(ltext); });
      if (!(len > 0.0)) throw ParseError("edge length must be > 0", lline);
      b.add_edge(id, from, to, len);
    } else if (s.name == "lead") {
      check_keys(s, {"id", "vertex"});
      const auto& [k1, idtext, idline] = s.require("id");
      const auto& [k2, vtext, vline] = s.require("vertex");
      b.add_lead(at_line(idline, [&] { return parse_int(idtext); }), at_line(vline, [&] { return parse_int(vtext); }));
    } else {
      throw ParseError("unknown section [" + s.name + "]", s.line);
    }
  }
  try {
    return b.build();
  } catch (const InvariantViolation& e) {
    auto it = vertex_line.find(e.vertex());
    if (it == vertex_line.end()) throw;
    throw InvariantViolation("line " + std::to_string(it->second) + ": " + e.what(), e.vertex());
  }
}

MetricGraph load_graph(const std::string& path) { return parse_graph(read_text_file(path)); }

std::string serialize_graph(const MetricGraph& g) {
  std::ostringstream os;
  for (const Vertex& v : g.vertices()) {
    os << "[vertex]\nid = " << v.id << "\ncondition = ";
    switch (v.spec.kind) {
      case ConditionKind::Standard: os << "standard\n"; break;
      case ConditionKind::Dirichlet: os << "dirichlet\n"; break;
      case ConditionKind::Neumann: os << "neumann\n"; break;
      case ConditionKind::Delta: os << "delta " << exact(v.spec.strength) << "\n"; break;
      case ConditionKind::General: {
        os << "general\n";
        for (const auto* name : {"A", "B"}) {
          const CMatrix& M = name[0] == 'A' ? v.spec.A : v.spec.B;
          os << name << " = ";
          for (Eigen::Index r = 0; r < M.rows(); ++r) {
            if (r) os << "; ";
            for (Eigen::Index c = 0; c < M.cols(); ++c) os << (c ? ", " : "") << exact(M(r, c));
          }
          os << "\n";
        }
        break;
      }
    }
    os << "\n";
  }
  for (const Edge& e : g.edges())
    os << "[edge]\nid = " << e.id << "\nendpoints = " << e.from << ", " << e.to << "\nlength = " << exact(e.length)
       << "\n\n";
  for (const Lead& l : g.leads()) os << "[lead]\nid = " << l.id << "\nvertex = " << l.vertex << "\n\n";
  return os.str();
}

// ---------------------------------------------------------------------------

FunctionDescription parse_function(std::string_view text) {
  FunctionDescription out;
  for (const Section& s : parse_sections(text)) {
    if (s.name != "edge" && s.name != "lead") throw ParseError("unknown section [" + s.name + "]", s.line);
    check_keys(s, {"id", "piece"});
    const auto& [k, idtext, idline] = s.require("id");
    const int id = at_line(idline, [&] { return parse_int(idtext); });
    std::vector<PolyPiece> pieces;
    int last_line = s.line;
    for (const auto& [key, value, line] : s.entries) {
      if (key != "piece") continue;
      pieces.push_back(at_line(line, [&] { return parse_piece(value); }));
      last_line = line;
    }
    auto& target = s.name == "edge" ? out.edges : out.leads;
    if (target.count(id)) throw ParseError("duplicate [" + s.name + "] id " + std::to_string(id), idline);
    target.emplace(id, at_line(last_line, [&] { return PiecewisePolynomial(std::move(pieces)); }));
  }
  return out;
}

FunctionDescription load_function(const std::string& path) { return parse_function(read_text_file(path)); }

std::string serialize_function(const FunctionDescription& f) {
  std::ostringstream os;
  for (const auto* group : {&f.edges, &f.leads}) {
    const char* name = group == &f.edges ? "edge" : "lead";
    for (const auto& [id, pw] : *group) {
      os << "[" << name << "]\nid = " << id << "\n";
      for (const PolyPiece& p : pw.pieces()) {
        os << "piece = " << exact(p.x0) << ", " << exact(p.x1) << " :";
        const auto& c = p.poly.coeffs();
        if (c.empty()) os << " 0";
        for (std::size_t j = 0; j < c.size(); ++j) os << (j ? ", " : " ") << exact(c[j]);
        os << "\n";
      }
      os << "\n";
    }
  }
  return os.str();
}

CompositeFunction bind_function(const FunctionDescription& f, const MetricGraph& g) {
  const auto& att = g.attachments();
  CompositeFunction out;
  out.leads.components.assign(att.size(), PiecewisePolynomial{});
  for (const auto& [id, pw] : f.edges) {
    if (!g.find_edge(id)) throw StructuralError("function refers to unknown edge " + std::to_string(id));
    pw.check_domain(g.edge(id).length);
    if (!pw.empty()) out.interior[id] = pw;
  }
  for (const auto& [id, pw] : f.leads) {
    const auto li = g.find_lead(id);
    if (!li) throw StructuralError("function refers to unknown lead " + std::to_string(id));
    pw.check_domain(std::numeric_limits<double>::infinity());
    const Lead& lead = g.leads()[*li];
    PiecewisePolynomial on_lead = pw;
    for (const LeadSplit& s : g.splits()) {
      if (s.lead != id) continue;
      PiecewisePolynomial front = on_lead.restrict(0.0, s.offset);
      if (!front.empty()) {
        auto it = out.interior.find(s.new_edge);
        if (it == out.interior.end())
          out.interior.emplace(s.new_edge, std::move(front));
        else
          it->second = it->second + front;
      }
      on_lead = on_lead.restrict(s.offset, std::numeric_limits<double>::infinity(), s.offset);
    }
    const int b = g.boundary_index(lead.vertex);
    out.leads.components[static_cast<std::size_t>(b)] = on_lead;
  }
  return out;
}

}  // namespace qgraph
