#include <cmath>
#include <string>
#include <vector>

#include "geclust/error.hpp"
#include "geclust/graph.hpp"
#include "geclust/text.hpp"

namespace geclust {

namespace {

struct EdgeLine {
  std::string_view u;
  std::string_view v;
  double weight = 1.0;
  std::string_view layer;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Calls fn(line_number, EdgeLine) for each data line.
template <typename Fn>
void for_each_edge_line(std::string_view text, bool weighted, bool layered, Fn&& fn) {
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(text)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto fields = split_ws(line);
    if (fields.empty()) continue;

    const std::size_t min_fields = layered ? 3 : 2;
    const std::size_t max_fields = layered ? 4 : 3;
    if (fields.size() < min_fields || fields.size() > max_fields) {
      throw ParseError(layered ? "expected `u v [w] layer`, got " + std::to_string(fields.size()) + " fields"
                               : "expected `u v [w]`, got " + std::to_string(fields.size()) + " fields",
                       line_no);
    }
    EdgeLine e;
    e.u = fields[0];
    e.v = fields[1];
    if (layered) e.layer = fields.back();
    if (fields.size() == max_fields) {
      double w = 0.0;
      if (!parse_double(fields[2], w)) throw ParseError("cannot parse weight '" + std::string(fields[2]) + "'", line_no);
      if (weighted) e.weight = w;
    }
    if (e.u == e.v)
      throw ParseError("self-loop on node '" + std::string(e.u) + "': graphs must not contain self-loops", line_no);
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ParseError("edge weight must be positive and finite", line_no);
    fn(line_no, e);
  }
}

std::string format_weight(double w) { return format_double(w); }

}  // namespace

Graph parse_edge_list(std::string_view text, bool weighted) {
  GraphBuilder b;
  for_each_edge_line(text, weighted, false, [&](std::size_t, const EdgeLine& e) { b.add_edge(e.u, e.v, e.weight); });
  return b.build();
}

MultilayerGraph parse_multilayer_edge_list(std::string_view text, bool weighted) {
  MultilayerGraph mg;
  for_each_edge_line(text, weighted, true,
                     [&](std::size_t, const EdgeLine& e) { mg.add_edge(e.u, e.v, e.weight, e.layer); });
  return mg;
}

Graph load_edge_list(const std::string& path, bool weighted) { return parse_edge_list(read_file(path), weighted); }

MultilayerGraph load_multilayer_edge_list(const std::string& path, bool weighted) {
  return parse_multilayer_edge_list(read_file(path), weighted);
}

std::string format_edge_list(const Graph& g) {
  std::string out;
  const auto& ids = g.node_ids();
  for (const auto& e : g.edges()) {
    out += ids[e.u];
    out += ' ';
    out += ids[e.v];
    out += ' ';
    out += format_weight(e.weight);
    out += '\n';
  }
  return out;
}

std::string format_edge_list(const MultilayerGraph& mg) {
  std::string out;
  for (const auto& e : mg.intra_edges()) {
    const auto& cu = mg.copies()[e.u];
    const auto& cv = mg.copies()[e.v];
    out += mg.base_ids()[cu.base];
    out += ' ';
    out += mg.base_ids()[cv.base];
    out += ' ';
    out += format_weight(e.weight);
    out += ' ';
    out += mg.layer_ids()[cu.layer];
    out += '\n';
  }
  return out;
}

void save_edge_list(const Graph& g, const std::string& path) { write_file(path, format_edge_list(g)); }

void save_edge_list(const MultilayerGraph& mg, const std::string& path) { write_file(path, format_edge_list(mg)); }

}  // namespace geclust
