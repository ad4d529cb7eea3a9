#include "geclust/pipeline.hpp"

#include <algorithm>

#include "geclust/error.hpp"
#include "geclust/seed.hpp"

namespace geclust {

Method parse_method(const std::string& name) {
  if (name == "baseline") return Method::baseline;
  if (name == "ge") return Method::ge;
  if (name == "tsne") return Method::tsne;
  if (name == "ge+tsne") return Method::ge_tsne;
  const auto tsne_at = name.find("tsne");
  const auto ge_at = name.rfind("ge");
  if (tsne_at != std::string::npos && ge_at != std::string::npos && ge_at > tsne_at)
    throw ConfigError("invalid method '" + name +
                      "': GE needs observations on the original graph nodes, so it cannot follow tSNE");
  throw ConfigError("unknown method '" + name + "' (expected baseline, ge, tsne or ge+tsne)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::baseline: return "baseline";
    case Method::ge: return "ge";
    case Method::tsne: return "tsne";
    case Method::ge_tsne: return "ge+tsne";
  }
  return "?";
}

bool uses_graph(Method method) { return method == Method::ge || method == Method::ge_tsne; }
bool uses_tsne(Method method) { return method == Method::tsne || method == Method::ge_tsne; }

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::baseline, Method::ge, Method::tsne, Method::ge_tsne};
  return methods;
}

nlohmann::ordered_json metrics_json(double ami_value, std::size_t n_clusters, std::size_t n_noise) {
  nlohmann::ordered_json j;
  j["ami"] = ami_value;
  j["n_clusters"] = n_clusters;
  j["n_noise"] = n_noise;
  return j;
}

namespace {

PipelineResult run_impl(const LaplacianView* laplacian, const AttributeMatrix& attrs, const PipelineSpec& spec,
                        const std::string& graph_fingerprint) {
  check_attributes(attrs);
  if (uses_graph(spec.method) && !laplacian)
    throw ConfigError("method '" + to_string(spec.method) + "' needs a graph");
  if (!uses_graph(spec.method) && laplacian)
    throw ConfigError("method '" + to_string(spec.method) + "' does not use a graph; omit it");

  PipelineResult out;
  auto& meta = out.metadata;
  meta["method"] = to_string(spec.method);
  meta["seed"] = spec.seed;
  meta["n_observations"] = attrs.rows();
  meta["n_dimensions"] = attrs.cols();

  DistanceMatrix dist;
  if (uses_graph(spec.method)) {
    auto opts = spec.distance;
    opts.threads = spec.threads;
    const auto backend = resolve_backend(opts, laplacian->dimension());
    opts.backend = backend;
    dist = pairwise_distances(*laplacian, attrs, opts);
    meta["graph_fingerprint"] = graph_fingerprint;
    meta["metric"] = "ge";
    meta["backend"] = to_string(backend);
    if (backend == Backend::solver) meta["solver_tolerance"] = opts.solver.tolerance;
  } else {
    dist = euclidean_distances(attrs, spec.threads);
    meta["metric"] = "euclidean";
  }

  const DistanceMatrix* cluster_input = &dist;
  DistanceMatrix embedded;
  if (uses_tsne(spec.method)) {
    auto cfg = spec.tsne;
    cfg.seed = derive_seed(spec.seed, "tsne");
    cfg.threads = spec.threads;
    out.embedding = tsne_embed(dist, cfg);
    embedded = euclidean_distances(out.embedding->coords, out.embedding->ids, spec.threads);
    cluster_input = &embedded;
    meta["tsne"] = {{"perplexity", out.embedding->perplexity},
                    {"iterations", cfg.iterations},
                    {"exaggeration", cfg.exaggeration},
                    {"exaggeration_iterations", cfg.exaggeration_iterations},
                    {"learning_rate", out.embedding->learning_rate},
                    {"initial_momentum", cfg.initial_momentum},
                    {"final_momentum", cfg.final_momentum},
                    {"seed", cfg.seed},
                    {"initial_kl", out.embedding->initial_kl},
                    {"final_kl", out.embedding->kl}};
  }

  auto db = dbscan(*cluster_input, spec.dbscan);
  if (db.knee && db.knee->fallback) out.warnings.push_back(db.knee->warning);
  out.labels = std::move(db.labeling);
  out.eval_labels = expand_noise(out.labels.labels);
  out.eps = db.eps;
  out.min_pts = db.min_pts;
  out.n_clusters = db.n_clusters;
  out.n_noise = db.n_noise;
  meta["dbscan"] = {{"eps", db.eps},
                    {"eps_mode", spec.dbscan.eps_mode == EpsMode::knee ? "knee" : "explicit"},
                    {"min_pts", db.min_pts}};
  meta["n_clusters"] = out.n_clusters;
  meta["n_noise"] = out.n_noise;
  meta["ami_normalization"] = "arithmetic";
  meta["noise_evaluation"] = "singleton";
  return out;
}

}  // namespace

PipelineResult run_pipeline(const LaplacianView* laplacian, const AttributeMatrix& attrs, const PipelineSpec& spec) {
  return run_impl(laplacian, attrs, spec, laplacian ? laplacian->fingerprint : std::string());
}

PipelineResult run_pipeline(const Graph* graph, const AttributeMatrix& attrs, const PipelineSpec& spec) {
  if (!uses_graph(spec.method)) {
    if (graph) throw ConfigError("method '" + to_string(spec.method) + "' does not use a graph; omit it");
    return run_impl(nullptr, attrs, spec, {});
  }
  if (!graph) throw ConfigError("method '" + to_string(spec.method) + "' needs a graph");
  const auto laplacian = build_laplacian(*graph);
  return run_impl(&laplacian, align_to_graph(attrs, *graph), spec, graph->fingerprint());
}

}  // namespace geclust
