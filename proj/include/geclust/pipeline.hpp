#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geclust/attributes.hpp"
#include "geclust/dbscan.hpp"
#include "geclust/ge_metric.hpp"
#include "geclust/graph.hpp"
#include "geclust/tsne.hpp"

namespace geclust {

/// Clustering variants. GE may only come before tSNE: once observations are
/// reduced to two dimensions they no longer live on the graph's nodes.
enum class Method { baseline, ge, tsne, ge_tsne };

/// Accepts "baseline", "ge", "tsne", "ge+tsne". Throws ConfigError for
/// anything else, with a specific message for compositions placing GE after tSNE.
Method parse_method(const std::string& name);
std::string to_string(Method method);
bool uses_graph(Method method);
bool uses_tsne(Method method);
const std::vector<Method>& all_methods();

struct PipelineSpec {
  Method method = Method::ge_tsne;
  DistanceOptions distance;
  TsneConfig tsne;
  DbscanConfig dbscan;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct PipelineResult {
  Labeling labels;
  /// Labels with each noise point as its own singleton cluster.
  std::vector<int> eval_labels;
  std::optional<Embedding> embedding;
  double eps = 0.0;
  std::size_t min_pts = 0;
  std::size_t n_clusters = 0;
  std::size_t n_noise = 0;
  std::vector<std::string> warnings;
  /// Every resolved parameter needed to rerun the computation.
  nlohmann::ordered_json metadata;
};

/// baseline: Euclidean -> DBSCAN; ge: GE -> DBSCAN;
/// tsne: Euclidean -> tSNE -> 2D Euclidean -> DBSCAN;
/// ge+tsne: GE -> tSNE -> 2D Euclidean -> DBSCAN.
/// `graph` must be non-null exactly when the method uses GE.
PipelineResult run_pipeline(const Graph* graph, const AttributeMatrix& attrs, const PipelineSpec& spec);

/// Variant for a precomputed Laplacian (e.g. a multilayer supra-Laplacian);
/// attribute columns must already follow the Laplacian's node order.
PipelineResult run_pipeline(const LaplacianView* laplacian, const AttributeMatrix& attrs, const PipelineSpec& spec);

/// {"ami", "n_clusters", "n_noise"} for one evaluation.
nlohmann::ordered_json metrics_json(double ami_value, std::size_t n_clusters, std::size_t n_noise);

}  // namespace geclust
