#include "geclust/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>

#include "geclust/error.hpp"
#include "geclust/seed.hpp"

namespace geclust {

namespace {

std::uint64_t pair_key(std::size_t u, std::size_t v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

void check_weight(double w) {
  if (!std::isfinite(w) || w <= 0.0)
    throw GraphError("edge weight must be positive and finite, got " + std::to_string(w));
}

}  // namespace

std::optional<std::size_t> Graph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::pair<std::size_t, double>> Graph::neighbors(std::size_t i) const {
  return std::span(adj_).subspan(adj_offsets_[i], adj_offsets_[i + 1] - adj_offsets_[i]);
}

double Graph::weighted_degree(std::size_t i) const {
  double d = 0.0;
  for (const auto& [j, w] : neighbors(i)) d += w;
  return d;
}

std::string Graph::fingerprint() const {
  std::uint64_t h = fnv1a("geclust-graph");
  for (const auto& id : ids_) {
    h = fnv1a(id, h);
    h = fnv1a(std::string_view("\0", 1), h);
  }
  for (const auto& e : edges_) {
    h = mix64(h ^ e.u);
    h = mix64(h ^ e.v);
    h = mix64(h ^ std::bit_cast<std::uint64_t>(e.weight));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t GraphBuilder::add_node(std::string_view id) {
  auto [it, inserted] = index_.try_emplace(std::string(id), ids_.size());
  if (inserted) ids_.emplace_back(id);
  return it->second;
}

void GraphBuilder::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= ids_.size() || v >= ids_.size()) throw GraphError("edge endpoint out of range");
  if (u == v) throw GraphError("self-loop on node '" + ids_[u] + "': graphs must not contain self-loops");
  check_weight(weight);
  if (u > v) std::swap(u, v);
  auto [it, inserted] = edge_slot_.try_emplace(pair_key(u, v), edges_.size());
  if (inserted)
    edges_.push_back({u, v, weight});
  else
    edges_[it->second].weight += weight;
}

void GraphBuilder::add_edge(std::string_view u, std::string_view v, double weight) {
  if (u == v) throw GraphError("self-loop on node '" + std::string(u) + "': graphs must not contain self-loops");
  check_weight(weight);
  const auto iu = add_node(u);
  const auto iv = add_node(v);
  add_edge(iu, iv, weight);
}

Graph GraphBuilder::build() const {
  Graph g;
  g.ids_ = ids_;
  g.index_ = index_;
  g.edges_ = edges_;
  const std::size_t n = ids_.size();
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  g.adj_offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.adj_offsets_[i + 1] = g.adj_offsets_[i] + degree[i];
  g.adj_.resize(g.adj_offsets_[n]);
  std::vector<std::size_t> cursor(g.adj_offsets_.begin(), g.adj_offsets_.end() - 1);
  for (const auto& e : edges_) {
    g.adj_[cursor[e.u]++] = {e.v, e.weight};
    g.adj_[cursor[e.v]++] = {e.u, e.weight};
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(g.adj_.begin() + g.adj_offsets_[i], g.adj_.begin() + g.adj_offsets_[i + 1]);
  return g;
}

std::vector<std::size_t> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, unset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : g.neighbors(u)) {
        if (comp[v] == unset) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

ValidationReport validate_graph(const Graph& g) {
  ValidationReport report;
  const std::size_t n = g.node_count();
  if (n == 0) {
    report.warnings.emplace_back("graph has no nodes");
    return report;
  }
  const auto comp = connected_components(g);
  const std::size_t count = *std::max_element(comp.begin(), comp.end()) + 1;
  report.component_sizes.assign(count, 0);
  for (auto c : comp) ++report.component_sizes[c];
  std::sort(report.component_sizes.begin(), report.component_sizes.end(), std::greater<>());
  report.connected = count == 1;
  if (n == 1) report.warnings.emplace_back("single-node graph: every GE distance over it is 0");
  return report;
}

Graph largest_component(const Graph& g) {
  const auto comp = connected_components(g);
  if (comp.empty()) return g;
  const std::size_t count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto c : comp) ++sizes[c];
  const auto keep = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  if (count == 1) return g;

  GraphBuilder b;
  std::vector<std::size_t> remap(g.node_count(), 0);
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (comp[i] == keep) remap[i] = b.add_node(g.node_ids()[i]);
  for (const auto& e : g.edges())
    if (comp[e.u] == keep) b.add_edge(remap[e.u], remap[e.v], e.weight);
  return b.build();
}

LaplacianView build_laplacian(const Graph& g) {
  const auto report = validate_graph(g);
  if (!report.ok()) {
    std::string msg = "cannot build Laplacian: graph must have a single connected component";
    if (!report.component_sizes.empty())
      msg += " (found " + std::to_string(report.component_sizes.size()) + " components)";
    throw GraphError(msg);
  }
  const auto n = static_cast<Eigen::Index>(g.node_count());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.node_count() + 2 * g.edge_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    triplets.emplace_back(ii, ii, g.weighted_degree(i));
    for (const auto& [j, w] : g.neighbors(i)) triplets.emplace_back(ii, static_cast<Eigen::Index>(j), -w);
  }
  LaplacianView view;
  view.matrix.resize(n, n);
  view.matrix.setFromTriplets(triplets.begin(), triplets.end());
  view.matrix.makeCompressed();
  view.kind = LaplacianKind::single_layer;
  view.fingerprint = g.fingerprint();
  return view;
}

std::size_t MultilayerGraph::intern(std::vector<std::string>& ids,
                                    std::unordered_map<std::string, std::size_t>& index, std::string_view id) {
  auto [it, inserted] = index.try_emplace(std::string(id), ids.size());
  if (inserted) ids.emplace_back(id);
  return it->second;
}

std::size_t MultilayerGraph::copy_of(std::size_t base, std::size_t layer) {
  auto [it, inserted] = copy_index_.try_emplace({base, layer}, copies_.size());
  if (inserted) copies_.push_back({base, layer});
  return it->second;
}

void MultilayerGraph::add_edge(std::string_view u, std::string_view v, double weight, std::string_view layer) {
  if (u == v)
    throw GraphError("self-loop on node '" + std::string(u) + "': graphs must not contain self-loops");
  check_weight(weight);
  const auto t = intern(layer_ids_, layer_index_, layer);
  const auto cu = copy_of(intern(base_ids_, base_index_, u), t);
  const auto cv = copy_of(intern(base_ids_, base_index_, v), t);
  const auto key = std::minmax(cu, cv);
  auto [it, inserted] = intra_slot_.try_emplace({key.first, key.second}, intra_.size());
  if (inserted)
    intra_.push_back({key.first, key.second, weight});
  else
    intra_[it->second].weight += weight;
}

std::string MultilayerGraph::copy_id(std::size_t copy) const {
  const auto& c = copies_.at(copy);
  return base_ids_[c.base] + "@" + layer_ids_[c.layer];
}

std::vector<Edge> MultilayerGraph::couplings(double coupling_weight) const {
  check_weight(coupling_weight);
  std::vector<std::vector<std::size_t>> by_base(base_ids_.size());
  for (std::size_t c = 0; c < copies_.size(); ++c) by_base[copies_[c].base].push_back(c);
  std::vector<Edge> out;
  for (const auto& group : by_base)
    for (std::size_t a = 0; a < group.size(); ++a)
      for (std::size_t b = a + 1; b < group.size(); ++b)
        out.push_back({std::min(group[a], group[b]), std::max(group[a], group[b]), coupling_weight});
  std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  return out;
}

Graph MultilayerGraph::flatten(double coupling_weight) const {
  GraphBuilder b;
  for (std::size_t c = 0; c < copies_.size(); ++c) b.add_node(copy_id(c));
  for (const auto& e : intra_) b.add_edge(e.u, e.v, e.weight);
  for (const auto& e : couplings(coupling_weight)) b.add_edge(e.u, e.v, e.weight);
  return b.build();
}

LaplacianView build_supra_laplacian(const MultilayerGraph& mg, double coupling_weight) {
  const Graph flat = mg.flatten(coupling_weight);
  const auto report = validate_graph(flat);
  if (!report.ok())
    throw GraphError("cannot build supra-Laplacian: the flattened multilayer graph must have a single connected component");

  std::vector<Edge> all(mg.intra_edges().size());
  std::transform(mg.intra_edges().begin(), mg.intra_edges().end(), all.begin(),
                 [](const MultilayerGraph::LayerEdge& e) { return Edge{e.u, e.v, e.weight}; });
  const auto coupled = mg.couplings(coupling_weight);
  all.insert(all.end(), coupled.begin(), coupled.end());

  const auto n = static_cast<Eigen::Index>(mg.copy_count());
  const auto m = static_cast<Eigen::Index>(all.size());
  Eigen::SparseMatrix<double> incidence(n, m);
  Eigen::SparseMatrix<double> weights(m, m);
  std::vector<Eigen::Triplet<double>> bt;
  std::vector<Eigen::Triplet<double>> wt;
  bt.reserve(2 * all.size());
  wt.reserve(all.size());
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& e = all[static_cast<std::size_t>(k)];
    bt.emplace_back(static_cast<Eigen::Index>(e.u), k, 1.0);
    bt.emplace_back(static_cast<Eigen::Index>(e.v), k, -1.0);
    wt.emplace_back(k, k, e.weight);
  }
  incidence.setFromTriplets(bt.begin(), bt.end());
  weights.setFromTriplets(wt.begin(), wt.end());

  LaplacianView view;
  Eigen::SparseMatrix<double> bwbt = incidence * weights * incidence.transpose();
  view.matrix = bwbt;
  view.matrix.prune(0.0);
  view.matrix.makeCompressed();
  view.kind = LaplacianKind::supra;
  view.fingerprint = flat.fingerprint();
  return view;
}

}  // namespace geclust
