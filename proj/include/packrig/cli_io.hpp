#ifndef PACKRIG_CLI_IO_HPP
#define PACKRIG_CLI_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "packrig/first_order.hpp"

namespace packrig {

/** \brief Malformed document, located by 1-based line and column. */
class ParseError : public InvalidInput {
 public:
  ParseError(int line, int column, const std::string& what)
      : InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/** \brief Contents of a packing document. */
struct PackingDocument {
  PlanarEmbeddedGraph graph;
  Packing packing;
  ConstraintPartition partition;
};

/** \brief Contents of a graph document: combinatorics and coloring without geometry. */
struct GraphDocument {
  PlanarEmbeddedGraph graph;
  ConstraintPartition partition;
};

/** \brief Shortest decimal string that reads back to the same double. */
inline std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace detail {

struct Token {
  std::string_view text;
  int column = 0;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(pos, end - pos);
    ++number;
    if (const std::size_t hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < row.size()) {
      while (i < row.size() && (row[i] == ' ' || row[i] == '\t' || row[i] == '\r')) ++i;
      const std::size_t start = i;
      while (i < row.size() && row[i] != ' ' && row[i] != '\t' && row[i] != '\r') ++i;
      if (i > start) line.tokens.push_back({row.substr(start, i - start), static_cast<int>(start) + 1});
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

inline double parse_real(const Line& line, const Token& tok, const char* field) {
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError(line.number, tok.column, std::string("expected a number for ") + field + ", got '" +
                                                  std::string(tok.text) + "'");
  if (!std::isfinite(value)) throw ParseError(line.number, tok.column, std::string(field) + " must be finite");
  return value;
}

inline int parse_int(const Line& line, const Token& tok, const char* field) {
  int value = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError(line.number, tok.column, std::string("expected an integer for ") + field + ", got '" +
                                                  std::string(tok.text) + "'");
  return value;
}

inline RadiusTag parse_tag(const Line& line, const Token& tok) {
  if (tok.text == "+") return RadiusTag::Increase;
  if (tok.text == "-") return RadiusTag::Decrease;
  if (tok.text == "=") return RadiusTag::Fixed;
  if (tok.text == "0") return RadiusTag::Free;
  throw ParseError(line.number, tok.column, "tag must be one of + - = 0, got '" + std::string(tok.text) + "'");
}

inline bool parse_flag(const Line& line, const Token& tok) {
  if (tok.text == "1") return true;
  if (tok.text == "0") return false;
  throw ParseError(line.number, tok.column, "boundary flag must be 0 or 1, got '" + std::string(tok.text) + "'");
}

struct VertexRow {
  int line = 0;
  Disk disk;
  RadiusTag tag = RadiusTag::Free;
  bool boundary = false;
};

struct RotationRow {
  const Line* line = nullptr;
  std::vector<VertexId> neighbors;
};

/**
 * \brief Shared reader for both document kinds; geometry is read only for packings.
 */
inline std::pair<std::vector<VertexRow>, PlanarEmbeddedGraph> parse_document(std::string_view text,
                                                                             std::string_view kind, bool geometry) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError(1, 1, "empty document, expected '" + std::string(kind) + " 1'");
  const Line& head = lines.front();
  if (head.tokens[0].text != kind)
    throw ParseError(head.number, head.tokens[0].column, "expected header '" + std::string(kind) + " 1'");
  if (head.tokens.size() != 2) throw ParseError(head.number, head.tokens[0].column, "header takes one version number");
  if (parse_int(head, head.tokens[1], "format version") != 1)
    throw ParseError(head.number, head.tokens[1].column, "unsupported format version");

  std::map<int, VertexRow> vertices;
  std::map<int, RotationRow> rotations;
  const std::size_t vertex_fields = geometry ? 7 : 4;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const Token& key = line.tokens[0];
    if (key.text == "vertex") {
      if (line.tokens.size() != vertex_fields)
        throw ParseError(line.number, key.column,
                         geometry ? "vertex line needs: vertex <id> <x> <y> <r> <tag> <boundary>"
                                  : "vertex line needs: vertex <id> <tag> <boundary>");
      const int id = parse_int(line, line.tokens[1], "vertex id");
      if (id < 1) throw ParseError(line.number, line.tokens[1].column, "vertex ids start at 1");
      if (vertices.count(id)) throw ParseError(line.number, line.tokens[1].column, "vertex " + std::to_string(id) + " defined twice");
      VertexRow row;
      row.line = line.number;
      std::size_t t = 2;
      if (geometry) {
        row.disk.x = parse_real(line, line.tokens[2], "x");
        row.disk.y = parse_real(line, line.tokens[3], "y");
        row.disk.r = parse_real(line, line.tokens[4], "r");
        if (!(row.disk.r > 0.0))
          throw ParseError(line.number, line.tokens[4].column, "radius must be positive");
        t = 5;
      }
      row.tag = parse_tag(line, line.tokens[t]);
      row.boundary = parse_flag(line, line.tokens[t + 1]);
      vertices[id] = row;
    } else if (key.text == "rotation") {
      if (line.tokens.size() < 2) throw ParseError(line.number, key.column, "rotation line needs a vertex id");
      const int id = parse_int(line, line.tokens[1], "vertex id");
      if (rotations.count(id))
        throw ParseError(line.number, line.tokens[1].column, "rotation of vertex " + std::to_string(id) + " given twice");
      RotationRow row{&line, {}};
      for (std::size_t t = 2; t < line.tokens.size(); ++t) row.neighbors.push_back(parse_int(line, line.tokens[t], "neighbor id"));
      rotations[id] = row;
    } else {
      throw ParseError(line.number, key.column, "unknown keyword '" + std::string(key.text) + "'");
    }
  }

  const int n = static_cast<int>(vertices.size());
  if (n == 0) throw ParseError(head.number, 1, "document has no vertices");
  for (int v = 1; v <= n; ++v)
    if (!vertices.count(v)) throw ParseError(lines.back().number, 1, "vertex ids must be 1.." + std::to_string(n) + "; missing " + std::to_string(v));
  for (const auto& [id, row] : rotations) {
    if (id < 1 || id > n) throw ParseError(row.line->number, row.line->tokens[1].column, "rotation for unknown vertex " + std::to_string(id));
    for (std::size_t t = 0; t < row.neighbors.size(); ++t) {
      const VertexId u = row.neighbors[t];
      const int col = row.line->tokens[t + 2].column;
      if (u < 1 || u > n) throw ParseError(row.line->number, col, "unknown neighbor " + std::to_string(u));
      if (u == id) throw ParseError(row.line->number, col, "vertex " + std::to_string(id) + " lists itself");
    }
  }
  for (int v = 1; v <= n; ++v)
    if (!rotations.count(v)) throw ParseError(vertices[v].line, 1, "no rotation line for vertex " + std::to_string(v));
  for (const auto& [id, row] : rotations) {
    for (std::size_t t = 0; t < row.neighbors.size(); ++t) {
      const VertexId u = row.neighbors[t];
      const auto& back = rotations[u].neighbors;
      if (std::find(back.begin(), back.end(), id) == back.end())
        throw ParseError(row.line->number, row.line->tokens[t + 2].column,
                         "inconsistent rotations: edge (" + std::to_string(id) + "," + std::to_string(u) +
                             ") is listed at vertex " + std::to_string(id) + " only");
    }
  }

  std::vector<std::vector<VertexId>> rot(static_cast<std::size_t>(n));
  std::vector<bool> boundary(static_cast<std::size_t>(n));
  std::vector<VertexRow> rows;
  for (int v = 1; v <= n; ++v) {
    rot[v - 1] = rotations[v].neighbors;
    boundary[v - 1] = vertices[v].boundary;
    rows.push_back(vertices[v]);
  }
  try {
    return {rows, PlanarEmbeddedGraph(rot, boundary)};
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(head.number, 1, std::string("invalid rotation system: ") + e.what());
  }
}

inline ConstraintPartition partition_of(const std::vector<VertexRow>& rows) {
  std::vector<RadiusTag> tags;
  for (const auto& row : rows) tags.push_back(row.tag);
  return ConstraintPartition(tags);
}

inline void write_rotations(std::ostringstream& out, const PlanarEmbeddedGraph& graph) {
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    out << "rotation " << v;
    for (VertexId u : graph.rotation(v)) out << ' ' << u;
    out << '\n';
  }
}

inline std::map<VertexId, double> parse_vertex_values(std::string_view text, const char* what, bool positive) {
  std::map<VertexId, double> out;
  for (const Line& line : tokenize(text)) {
    if (line.tokens.size() != 2)
      throw ParseError(line.number, line.tokens[0].column, std::string(what) + " line needs: <id> <value>");
    const int id = parse_int(line, line.tokens[0], "vertex id");
    const double value = parse_real(line, line.tokens[1], what);
    if (positive ? !(value > 0.0) : !(value >= 0.0))
      throw ParseError(line.number, line.tokens[1].column,
                       std::string(what) + (positive ? " must be positive" : " must be nonnegative"));
    if (!out.emplace(id, value).second)
      throw ParseError(line.number, line.tokens[0].column, "vertex " + std::to_string(id) + " given twice");
  }
  return out;
}

}  // namespace detail

/** \brief Reads a packing document; see README for the grammar. */
inline PackingDocument parse(std::string_view text) {
  auto [rows, graph] = detail::parse_document(text, "packing", true);
  std::vector<Disk> disks;
  for (const auto& row : rows) disks.push_back(row.disk);
  return PackingDocument{std::move(graph), Packing(disks), detail::partition_of(rows)};
}

inline std::string serialize(const PlanarEmbeddedGraph& graph, const Packing& packing,
                             const ConstraintPartition& partition) {
  detail::require_sizes(graph, packing.size(), "packing");
  detail::require_sizes(graph, partition.size(), "partition");
  std::ostringstream out;
  out << "packing 1\n";
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const Disk& d = packing.disk(v);
    out << "vertex " << v << ' ' << format_number(d.x) << ' ' << format_number(d.y) << ' ' << format_number(d.r) << ' '
        << tag_symbol(partition.tag(v)) << ' ' << (graph.is_boundary(v) ? 1 : 0) << '\n';
  }
  detail::write_rotations(out, graph);
  return out.str();
}

inline std::string serialize(const PackingDocument& doc) { return serialize(doc.graph, doc.packing, doc.partition); }

/** \brief Reads a graph document (no coordinates or radii). */
inline GraphDocument parse_graph(std::string_view text) {
  auto [rows, graph] = detail::parse_document(text, "graph", false);
  return GraphDocument{std::move(graph), detail::partition_of(rows)};
}

inline std::string serialize_graph(const PlanarEmbeddedGraph& graph, const ConstraintPartition& partition) {
  detail::require_sizes(graph, partition.size(), "partition");
  std::ostringstream out;
  out << "graph 1\n";
  for (int v = 1; v <= graph.vertex_count(); ++v)
    out << "vertex " << v << ' ' << tag_symbol(partition.tag(v)) << ' ' << (graph.is_boundary(v) ? 1 : 0) << '\n';
  detail::write_rotations(out, graph);
  return out.str();
}

/** \brief Reads "<id> <radius>" lines. */
inline std::map<VertexId, double> parse_radii(std::string_view text) {
  return detail::parse_vertex_values(text, "radius", true);
}

/** \brief Reads "<id> <cost>" lines. */
inline std::map<VertexId, double> parse_costs(std::string_view text) {
  return detail::parse_vertex_values(text, "cost", false);
}

/** \brief Ordered key/value report printed as "key: value" lines. */
class Report {
 public:
  void add(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, const char* value) { rows_.emplace_back(key, value); }
  void add(const std::string& key, bool value) { rows_.emplace_back(key, value ? "true" : "false"); }
  void add(const std::string& key, int value) { rows_.emplace_back(key, std::to_string(value)); }
  void add(const std::string& key, double value) { rows_.emplace_back(key, format_number(value)); }
  void add(const std::string& key, const std::vector<VertexId>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
    rows_.emplace_back(key, s.empty() ? "none" : s);
  }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : rows_)
      if (k == key) return v;
    return std::nullopt;
  }
  const std::vector<std::pair<std::string, std::string>>& rows() const { return rows_; }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : rows_) out += k + ": " + v + '\n';
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

/** \brief "edge(u,v)=w" list for a stress, one entry per edge in graph order. */
inline std::string format_stress(const PlanarEmbeddedGraph& graph, const Stress& stress) {
  std::string s;
  const auto& edges = graph.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(edges[k].u) + '-' + std::to_string(edges[k].v) + '=' +
         format_number(stress.values[static_cast<Eigen::Index>(k)]);
  }
  return s;
}

/** \brief "v=r'" list of radius rates of a unit flex; magnitudes below 1e-12 print as 0. */
inline std::string format_radius_rates(const FlexVector& flex) {
  std::string s;
  for (int v = 1; v <= flex.vertex_count(); ++v) {
    const double r = std::abs(flex.r(v)) < 1e-12 ? 0.0 : flex.r(v);
    s += (v > 1 ? " " : "") + std::to_string(v) + '=' + format_number(r);
  }
  return s;
}

/**
 * \brief Tolerances from a "key=value,key=value" profile string.
 *
 * Keys are tol_tangency, tol_rank, tol_strict, tol_lp and tol_angle; omitted
 * keys keep their defaults.
 */
inline AnalysisTolerances tolerances_from_profile(std::string_view profile, AnalysisTolerances base = {}) {
  std::size_t pos = 0;
  while (pos < profile.size()) {
    std::size_t end = profile.find(',', pos);
    if (end == std::string_view::npos) end = profile.size();
    const std::string_view item = profile.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("tolerance profile entry '" + std::string(item) + "' lacks '='");
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    double value = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), value);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
      throw InvalidInput("tolerance profile value for '" + std::string(key) + "' is not a number");
    if (key == "tol_tangency")
      base.tol_tangency = value;
    else if (key == "tol_rank")
      base.tol_rank = value;
    else if (key == "tol_strict")
      base.tol_strict = value;
    else if (key == "tol_lp")
      base.tol_lp = value;
    else if (key == "tol_angle")
      base.tol_angle = value;
    else
      throw InvalidInput("unknown tolerance '" + std::string(key) + "'");
  }
  base.validate();
  return base;
}

/** \brief Name of the environment variable holding the default tolerance profile. */
inline constexpr const char* tolerance_profile_variable = "PACKRIG_TOLERANCES";

inline AnalysisTolerances tolerances_from_environment() {
  const char* profile = std::getenv(tolerance_profile_variable);
  return profile ? tolerances_from_profile(profile) : AnalysisTolerances{};
}

/** \brief Fill color of a disk: blue V-, red V+, green V=, gray V0. */
inline const char* disk_color(RadiusTag t) {
  switch (t) {
    case RadiusTag::Decrease: return "#4f7fd9";
    case RadiusTag::Increase: return "#d9534f";
    case RadiusTag::Fixed: return "#5cb85c";
    case RadiusTag::Free: return "#b0b0b0";
  }
  return "#b0b0b0";
}

/**
 * \brief SVG 1.1 drawing of a packing with id labels and optional edge stress labels.
 *
 * Edges whose stress is exactly zero carry no label. The y axis points up.
 */
inline std::string export_svg(const PlanarEmbeddedGraph& graph, const Packing& packing,
                              const ConstraintPartition& partition, const std::optional<Stress>& stress = std::nullopt) {
  detail::require_sizes(graph, packing.size(), "packing");
  detail::require_sizes(graph, partition.size(), "partition");
  if (stress && stress->values.size() != graph.edge_count())
    throw InvalidInput("stress length differs from edge count");
  double xmin = inf, xmax = -inf, ymin = inf, ymax = -inf;
  for (const Disk& d : packing.disks()) {
    xmin = std::min(xmin, d.x - d.r);
    xmax = std::max(xmax, d.x + d.r);
    ymin = std::min(ymin, d.y - d.r);
    ymax = std::max(ymax, d.y + d.r);
  }
  const double padx = 0.1 * (xmax - xmin);
  const double pady = 0.1 * (ymax - ymin);
  const double vx = xmin - padx;
  const double vy = -(ymax + pady);
  const double vw = xmax - xmin + 2 * padx;
  const double vh = ymax - ymin + 2 * pady;
  const double font = 0.04 * std::max(vw, vh);
  auto num = [](double v) { return format_number(v); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(vx) << ' ' << num(vy) << ' '
      << num(vw) << ' ' << num(vh) << "\">\n";
  out << "<g id=\"disks\" stroke=\"black\" stroke-width=\"" << num(0.004 * std::max(vw, vh)) << "\">\n";
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const Disk& d = packing.disk(v);
    out << "<circle id=\"disk" << v << "\" cx=\"" << num(d.x) << "\" cy=\"" << num(-d.y) << "\" r=\"" << num(d.r)
        << "\" fill=\"" << disk_color(partition.tag(v)) << "\" fill-opacity=\"0.6\"/>\n";
  }
  out << "</g>\n";
  out << "<g id=\"labels\" font-family=\"sans-serif\" font-size=\"" << num(font)
      << "\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
  for (int v = 1; v <= graph.vertex_count(); ++v) {
    const Disk& d = packing.disk(v);
    out << "<text class=\"disk-label\" x=\"" << num(d.x) << "\" y=\"" << num(-d.y) << "\">" << v << "</text>\n";
  }
  out << "</g>\n";
  if (stress) {
    out << "<g id=\"stress\" font-family=\"sans-serif\" font-size=\"" << num(0.7 * font)
        << "\" text-anchor=\"middle\" fill=\"#333333\">\n";
    const auto& edges = graph.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const double w = stress->values[static_cast<Eigen::Index>(k)];
      if (w == 0.0) continue;
      const Disk& a = packing.disk(edges[k].u);
      const Disk& b = packing.disk(edges[k].v);
      const double t = a.r / (a.r + b.r);
      const double mx = a.x + t * (b.x - a.x);
      const double my = a.y + t * (b.y - a.y);
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.3g", w);
      out << "<text class=\"edge-label\" x=\"" << num(mx) << "\" y=\"" << num(-my) << "\">" << buf << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace packrig

#endif  // PACKRIG_CLI_IO_HPP
