#include "geclust/attributes.hpp"

#include <cmath>
#include <unordered_map>

#include "geclust/error.hpp"
#include "geclust/graph.hpp"
#include "geclust/text.hpp"

namespace geclust {

namespace {

std::vector<std::vector<std::string_view>> parse_csv_rows(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  for (auto line : split_lines(text)) {
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    for (auto& c : cells) c = trim(c);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_cell(std::string_view cell, std::size_t line) {
  double v = 0.0;
  if (!parse_double(cell, v)) throw ParseError("cannot parse number '" + std::string(cell) + "'", line);
  return v;
}

}  // namespace

std::vector<std::string> index_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
  return ids;
}

void check_attributes(const AttributeMatrix& attrs) {
  if (attrs.observation_ids.size() != attrs.rows())
    throw ConfigError("attribute matrix: observation id count does not match row count");
  if (!attrs.column_ids.empty() && attrs.column_ids.size() != attrs.cols())
    throw ConfigError("attribute matrix: column id count does not match column count");
  if (!attrs.values.allFinite()) throw NumericalError("attribute matrix contains NaN or Inf");
}

AttributeMatrix align_to_graph(const AttributeMatrix& attrs, const Graph& g) {
  if (attrs.cols() != g.node_count())
    throw ConfigError("attribute matrix has " + std::to_string(attrs.cols()) + " columns but the graph has " +
                      std::to_string(g.node_count()) + " nodes");
  if (attrs.column_ids.empty() || attrs.column_ids == g.node_ids()) return attrs;
  AttributeMatrix out;
  out.observation_ids = attrs.observation_ids;
  out.column_ids = g.node_ids();
  out.values.resize(attrs.values.rows(), attrs.values.cols());
  std::vector<bool> seen(g.node_count(), false);
  for (std::size_t c = 0; c < attrs.cols(); ++c) {
    const auto idx = g.index_of(attrs.column_ids[c]);
    if (!idx) throw ConfigError("attribute column '" + attrs.column_ids[c] + "' is not a graph node");
    if (seen[*idx]) throw ConfigError("attribute column '" + attrs.column_ids[c] + "' appears twice");
    seen[*idx] = true;
    out.values.col(static_cast<Eigen::Index>(*idx)) = attrs.values.col(static_cast<Eigen::Index>(c));
  }
  return out;
}

std::string format_attributes_csv(const AttributeMatrix& attrs) {
  std::string out = "observation_id";
  const auto cols = attrs.column_ids.empty() ? index_ids(attrs.cols()) : attrs.column_ids;
  for (const auto& c : cols) out += "," + c;
  out += '\n';
  for (std::size_t r = 0; r < attrs.rows(); ++r) {
    out += attrs.observation_ids[r];
    for (std::size_t c = 0; c < attrs.cols(); ++c) {
      out += ',';
      out += format_double(attrs.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
    out += '\n';
  }
  return out;
}

AttributeMatrix parse_attributes_csv(std::string_view text) {
  const auto rows = parse_csv_rows(text);
  if (rows.empty()) throw ParseError("attribute CSV is empty", 0);
  AttributeMatrix a;
  const auto& header = rows.front();
  for (std::size_t c = 1; c < header.size(); ++c) a.column_ids.emplace_back(header[c]);
  const std::size_t ncols = a.column_ids.size();
  a.values.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(ncols));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != ncols + 1)
      throw ParseError("expected " + std::to_string(ncols + 1) + " cells, got " + std::to_string(rows[r].size()), r + 1);
    a.observation_ids.emplace_back(rows[r][0]);
    for (std::size_t c = 0; c < ncols; ++c)
      a.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = parse_cell(rows[r][c + 1], r + 1);
  }
  check_attributes(a);
  return a;
}

AttributeMatrix load_attributes_csv(const std::string& path) { return parse_attributes_csv(read_file(path)); }

void save_attributes_csv(const AttributeMatrix& attrs, const std::string& path) {
  write_file(path, format_attributes_csv(attrs));
}

const char* to_string(MetricKind kind) {
  return kind == MetricKind::generalized_euclidean ? "ge" : "euclidean";
}

void check_distance_matrix(const DistanceMatrix& d) {
  const auto& m = d.values;
  if (m.rows() != m.cols()) throw ConfigError("distance matrix is not square");
  if (!d.ids.empty() && d.ids.size() != d.size()) throw ConfigError("distance matrix id count does not match size");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) throw ConfigError("distance matrix has a non-zero diagonal at row " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j)) || m(i, j) < 0.0)
        throw ConfigError("distance matrix has a negative or non-finite entry at (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      if (m(i, j) != m(j, i))
        throw ConfigError("distance matrix is not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
}

std::string format_distance_csv(const DistanceMatrix& d) {
  const auto ids = d.ids.empty() ? index_ids(d.size()) : d.ids;
  std::string out;
  for (const auto& id : ids) out += "," + id;
  out += '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out += ids[i];
    for (std::size_t j = 0; j < d.size(); ++j) {
      out += ',';
      out += format_double(d(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix parse_distance_csv(std::string_view text) {
  const auto rows = parse_csv_rows(text);
  if (rows.empty()) throw ParseError("distance CSV is empty", 0);
  const std::size_t n = rows.front().size() - 1;
  if (rows.size() != n + 1) throw ParseError("distance CSV must have one row per header id", 0);
  DistanceMatrix d;
  d.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n + 1) throw ParseError("expected " + std::to_string(n + 1) + " cells", i + 2);
    if (row[0] != rows.front()[i + 1]) throw ParseError("row id does not match header id", i + 2);
    d.ids.emplace_back(row[0]);
    for (std::size_t j = 0; j < n; ++j)
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_cell(row[j + 1], i + 2);
  }
  check_distance_matrix(d);
  return d;
}

DistanceMatrix load_distance_csv(const std::string& path) { return parse_distance_csv(read_file(path)); }

void save_distance_csv(const DistanceMatrix& d, const std::string& path) { write_file(path, format_distance_csv(d)); }

std::string format_labels_csv(const Labeling& labels, const std::vector<int>* eval_labels) {
  std::string out = eval_labels ? "observation_id,label,eval_label\n" : "observation_id,label\n";
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    out += labels.ids.empty() ? std::to_string(i) : labels.ids[i];
    out += ',' + std::to_string(labels.labels[i]);
    if (eval_labels) out += ',' + std::to_string((*eval_labels)[i]);
    out += '\n';
  }
  return out;
}

Labeling parse_labels_csv(std::string_view text) {
  const auto rows = parse_csv_rows(text);
  if (rows.empty()) throw ParseError("label CSV is empty", 0);
  Labeling out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) throw ParseError("expected `observation_id,label`", r + 1);
    const double v = parse_cell(rows[r][1], r + 1);
    if (v != std::floor(v)) throw ParseError("label must be an integer", r + 1);
    out.ids.emplace_back(rows[r][0]);
    out.labels.push_back(static_cast<int>(v));
  }
  return out;
}

Labeling load_labels_csv(const std::string& path) { return parse_labels_csv(read_file(path)); }

void save_labels_csv(const Labeling& labels, const std::string& path, const std::vector<int>* eval_labels) {
  write_file(path, format_labels_csv(labels, eval_labels));
}

}  // namespace geclust
