#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace geclust {

/// Undirected weighted edge between dense node indices, stored with u < v.
struct Edge {
  std::size_t u;
  std::size_t v;
  double weight;

  bool operator==(const Edge&) const = default;
};

/// Immutable undirected weighted graph. Node ids are opaque strings mapped to
/// dense indices in first-appearance order; that index is the matrix position
/// used everywhere else. Build one with GraphBuilder.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& node_ids() const noexcept { return ids_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  /// Neighbours of node i as (index, weight) pairs, ascending by index.
  std::span<const std::pair<std::size_t, double>> neighbors(std::size_t i) const;
  double weighted_degree(std::size_t i) const;

  /// 16 hex digits hashing node ids, edges and exact weight bits.
  std::string fingerprint() const;

  bool operator==(const Graph& other) const {
    return ids_ == other.ids_ && edges_ == other.edges_;
  }

 private:
  friend class GraphBuilder;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<std::pair<std::size_t, double>> adj_;
};

/// Accumulates nodes and edges; duplicate edges sum their weights.
class GraphBuilder {
 public:
  std::size_t add_node(std::string_view id);
  /// Throws GraphError on self-loops and non-positive or non-finite weights.
  void add_edge(std::size_t u, std::size_t v, double weight = 1.0);
  void add_edge(std::string_view u, std::string_view v, double weight = 1.0);

  std::size_t node_count() const noexcept { return ids_.size(); }
  Graph build() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_slot_;
};

struct ValidationReport {
  bool connected = false;
  /// Component sizes, descending. One entry when connected.
  std::vector<std::size_t> component_sizes;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return connected; }
};

/// Connectivity check by traversal from node 0. A single node is connected
/// (with a warning: every distance over it is zero); an empty graph is not.
ValidationReport validate_graph(const Graph& g);

/// Component id per node; ids are assigned in order of the lowest member index.
std::vector<std::size_t> connected_components(const Graph& g);

/// Largest connected component as a new graph, node order preserved.
Graph largest_component(const Graph& g);

enum class LaplacianKind { single_layer, supra };

/// Symmetric PSD Laplacian in compressed row storage. Row sums are zero.
struct LaplacianView {
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  Matrix matrix;
  LaplacianKind kind = LaplacianKind::single_layer;
  std::string fingerprint;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

/// L = D - A. Throws GraphError if the graph is empty or disconnected.
LaplacianView build_laplacian(const Graph& g);

/// Multilayer network: every (base node, layer) pair that appears in an
/// intra-layer edge is a node copy. Copies of the same base node are coupled
/// across every pair of layers they occur in.
class MultilayerGraph {
 public:
  struct Copy {
    std::size_t base;
    std::size_t layer;
  };
  struct LayerEdge {
    std::size_t u;  // copy index
    std::size_t v;  // copy index
    double weight;
  };

  std::size_t copy_count() const noexcept { return copies_.size(); }
  std::size_t layer_count() const noexcept { return layer_ids_.size(); }
  const std::vector<std::string>& base_ids() const noexcept { return base_ids_; }
  const std::vector<std::string>& layer_ids() const noexcept { return layer_ids_; }
  std::span<const Copy> copies() const noexcept { return copies_; }
  std::span<const LayerEdge> intra_edges() const noexcept { return intra_; }
  /// "<base>@<layer>", used as the flattened node id.
  std::string copy_id(std::size_t copy) const;

  /// Inter-layer couplings between copies of the same base node, each with
  /// the given weight; u < v, ordered by (u, v).
  std::vector<Edge> couplings(double coupling_weight) const;

  /// Supra-graph: copies as nodes, intra-layer edges plus couplings.
  Graph flatten(double coupling_weight) const;

  /// Adds an intra-layer edge, creating node copies as needed. Duplicates sum.
  void add_edge(std::string_view u, std::string_view v, double weight, std::string_view layer);

 private:
  std::size_t intern(std::vector<std::string>& ids, std::unordered_map<std::string, std::size_t>& index,
                     std::string_view id);
  std::size_t copy_of(std::size_t base, std::size_t layer);

  std::vector<std::string> base_ids_;
  std::unordered_map<std::string, std::size_t> base_index_;
  std::vector<std::string> layer_ids_;
  std::unordered_map<std::string, std::size_t> layer_index_;
  std::vector<Copy> copies_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> copy_index_;
  std::vector<LayerEdge> intra_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> intra_slot_;
};

/// L = B W B^T over intra-layer edges and couplings, B the oriented incidence
/// matrix. Equals build_laplacian(mg.flatten(coupling_weight)).
LaplacianView build_supra_laplacian(const MultilayerGraph& mg, double coupling_weight = 1.0);

// Edge-list files: UTF-8, '#' comments, whitespace separated `u v [w] [layer]`.

Graph load_edge_list(const std::string& path, bool weighted = true);
Graph parse_edge_list(std::string_view text, bool weighted = true);
MultilayerGraph load_multilayer_edge_list(const std::string& path, bool weighted = true);
MultilayerGraph parse_multilayer_edge_list(std::string_view text, bool weighted = true);

std::string format_edge_list(const Graph& g);
std::string format_edge_list(const MultilayerGraph& mg);
void save_edge_list(const Graph& g, const std::string& path);
void save_edge_list(const MultilayerGraph& mg, const std::string& path);

}  // namespace geclust
