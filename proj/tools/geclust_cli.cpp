// geclust: command-line front end for graph-aware clustering of node attributes.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geclust/ami.hpp"
#include "geclust/bench.hpp"
#include "geclust/error.hpp"
#include "geclust/pipeline.hpp"
#include "geclust/sbm.hpp"
#include "geclust/svg.hpp"
#include "geclust/sweep.hpp"
#include "geclust/text.hpp"

using namespace geclust;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out = ".";
  std::string config;
};

void add_common(CLI::App& cmd, Common& c) {
  cmd.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd.add_option("--threads", c.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  cmd.add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd.add_option("--config", c.config, "key=value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
}

std::string out_path(const Common& c, const std::string& name) { return (fs::path(c.out) / name).string(); }

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

std::string format_embedding_csv(const Embedding& e) {
  std::string out = "observation_id,x,y\n";
  for (std::size_t i = 0; i < e.ids.size(); ++i)
    out += e.ids[i] + ',' + format_double(e.coords(i, 0)) + ',' + format_double(e.coords(i, 1)) + '\n';
  return out;
}

// Graph input: plain edge list, or a layered one whose supra-Laplacian is used.
struct GraphInput {
  std::string path;
  bool unweighted = false;
  bool layered = false;
  double coupling = 1.0;
  std::string cache_dir;
};

void add_graph_options(CLI::App& cmd, GraphInput& g, bool required) {
  auto* opt = cmd.add_option("--graph", g.path, "Edge list `u v [w]` (or `u v [w] layer` with --layered)");
  if (required) opt->required();
  opt->check(CLI::ExistingFile);
  cmd.add_flag("--unweighted", g.unweighted, "Ignore edge weights");
  cmd.add_flag("--layered", g.layered, "Read a multilayer edge list and use its supra-Laplacian");
  cmd.add_option("--coupling", g.coupling, "Inter-layer coupling weight")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--cache-dir", g.cache_dir, "Directory for cached dense pseudoinverses");
}

struct LoadedGraph {
  Graph graph;  // flattened supra-graph for layered input
  std::optional<LaplacianView> supra;
};

LoadedGraph load_graph(const GraphInput& in) {
  LoadedGraph out;
  if (in.layered) {
    const auto mg = load_multilayer_edge_list(in.path, !in.unweighted);
    out.graph = mg.flatten(in.coupling);
    out.supra = build_supra_laplacian(mg, in.coupling);
  } else {
    out.graph = load_edge_list(in.path, !in.unweighted);
  }
  const auto report = validate_graph(out.graph);
  for (const auto& w : report.warnings) warn(w);
  if (!report.ok()) {
    std::string sizes;
    for (auto s : report.component_sizes) sizes += (sizes.empty() ? "" : ", ") + std::to_string(s);
    throw GraphError("graph is disconnected (component sizes: " + sizes + "); GE distances are undefined");
  }
  return out;
}

LaplacianView laplacian_of(const LoadedGraph& g) { return g.supra ? *g.supra : build_laplacian(g.graph); }

// Fills options not given on the command line from `key=value` lines, where
// key is a long option name without the leading dashes.
void apply_config(CLI::App& cmd, const std::string& path) {
  const auto text = read_file(path);
  std::size_t line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key == "config") throw ParseError("config files cannot include other config files", line_no);
    CLI::Option* opt = cmd.get_option_no_throw("--" + key);
    if (!opt) throw ParseError("unknown option '" + key + "' for " + cmd.get_name(), line_no);
    if (opt->count() > 0) continue;
    try {
      if (opt->get_delimiter() != '\0') {
        for (auto part : split(value, opt->get_delimiter())) opt->add_result(std::string(trim(part)));
      } else {
        opt->add_result(value);
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ParseError(key + ": " + e.what(), line_no);
    }
  }
}

// sbm-gen -------------------------------------------------------------------

struct SbmArgs {
  SbmConfig cfg;
};

void run_sbm_gen(const Common& c, SbmArgs a) {
  a.cfg.seed = c.seed;
  const auto data = generate_dataset(a.cfg);
  save_edge_list(data.graph, out_path(c, "graph.edgelist"));
  save_attributes_csv(data.attributes, out_path(c, "attributes.csv"));
  save_labels_csv(data.truth, out_path(c, "truth.csv"));
  Labeling nodes{data.graph.node_ids(), data.node_truth};
  save_labels_csv(nodes, out_path(c, "node_truth.csv"));
  json meta;
  meta["command"] = "sbm-gen";
  meta["seed"] = c.seed;
  meta["k"] = a.cfg.k;
  meta["community_size"] = a.cfg.community_size;
  meta["avg_degree"] = a.cfg.avg_degree;
  meta["d_out"] = a.cfg.d_out;
  meta["p_in"] = a.cfg.p_in();
  meta["p_out"] = a.cfg.p_out();
  meta["sigma"] = a.cfg.sigma;
  meta["n_obs"] = a.cfg.n_obs;
  meta["nodes"] = data.graph.node_count();
  meta["edges"] = data.graph.edge_count();
  meta["graph_fingerprint"] = data.graph.fingerprint();
  write_json(out_path(c, "metadata.json"), meta);
}

// dist ----------------------------------------------------------------------

struct DistArgs {
  GraphInput graph;
  std::string attrs;
  std::string metric = "auto";
  std::string backend = "auto";
  double tolerance = 1e-8;
};

void run_dist(const Common& c, const DistArgs& a) {
  const auto attrs = load_attributes_csv(a.attrs);
  const bool use_ge = a.metric == "ge" || (a.metric == "auto" && !a.graph.path.empty());
  if (a.metric == "ge" && a.graph.path.empty()) throw ConfigError("--metric ge needs --graph");
  if (a.metric == "euclidean" && !a.graph.path.empty()) throw ConfigError("--metric euclidean does not use --graph");
  json meta;
  meta["command"] = "dist";
  DistanceMatrix d;
  if (use_ge) {
    const auto g = load_graph(a.graph);
    const auto aligned = align_to_graph(attrs, g.graph);
    DistanceOptions opts;
    opts.backend = parse_backend(a.backend);
    opts.solver.tolerance = a.tolerance;
    opts.threads = c.threads;
    const auto lap = laplacian_of(g);
    const auto backend = resolve_backend(opts, lap.dimension());
    if (backend == Backend::dense && !a.graph.cache_dir.empty()) {
      const auto cache = PseudoinverseCache::load_or_compute(a.graph.cache_dir, lap);
      d = pairwise_distances(cache, aligned, c.threads);
    } else {
      opts.backend = backend;
      d = pairwise_distances(lap, aligned, opts);
    }
    meta["metric"] = "ge";
    meta["backend"] = to_string(backend);
    if (backend == Backend::solver) meta["solver_tolerance"] = a.tolerance;
    meta["graph_fingerprint"] = lap.fingerprint;
    meta["laplacian"] = g.supra ? "supra" : "single_layer";
    if (g.supra) meta["coupling"] = a.graph.coupling;
  } else {
    d = euclidean_distances(attrs, c.threads);
    meta["metric"] = "euclidean";
  }
  meta["n_observations"] = d.size();
  save_distance_csv(d, out_path(c, "distances.csv"));
  write_json(out_path(c, "metadata.json"), meta);
}

// tsne ----------------------------------------------------------------------

struct TsneArgs {
  std::string dist;
  TsneConfig cfg;
};

void run_tsne(const Common& c, TsneArgs a) {
  const auto d = load_distance_csv(a.dist);
  a.cfg.seed = c.seed;
  a.cfg.threads = c.threads;
  if (effective_perplexity(a.cfg.perplexity, d.size()) < a.cfg.perplexity)
    warn("perplexity clipped to (n - 1) / 3 = " + format_double(effective_perplexity(a.cfg.perplexity, d.size())));
  const auto e = tsne_embed(d, a.cfg);
  write_file(out_path(c, "embedding.csv"), format_embedding_csv(e));
  write_file(out_path(c, "embedding.svg"), render_scatter(e.coords, std::vector<int>(e.ids.size(), 0), "tSNE embedding"));
  json meta;
  meta["command"] = "tsne";
  meta["seed"] = c.seed;
  meta["perplexity"] = e.perplexity;
  meta["iterations"] = a.cfg.iterations;
  meta["exaggeration"] = a.cfg.exaggeration;
  meta["exaggeration_iterations"] = a.cfg.exaggeration_iterations;
  meta["learning_rate"] = e.learning_rate;
  meta["initial_kl"] = e.initial_kl;
  meta["final_kl"] = e.kl;
  write_json(out_path(c, "metadata.json"), meta);
}

// dbscan --------------------------------------------------------------------

struct DbscanArgs {
  std::string dist;
  std::string embedding;
  std::optional<double> eps;
  std::size_t min_pts = 4;
};

DistanceMatrix load_embedding_distances(const std::string& path) {
  const auto a = load_attributes_csv(path);
  return euclidean_distances(a.values, a.observation_ids);
}

void run_dbscan(const Common& c, const DbscanArgs& a) {
  if (a.dist.empty() == a.embedding.empty()) throw ConfigError("give exactly one of --dist or --embedding");
  const auto d = a.dist.empty() ? load_embedding_distances(a.embedding) : load_distance_csv(a.dist);
  DbscanConfig cfg;
  cfg.min_pts = a.min_pts;
  if (a.eps) {
    cfg.eps_mode = EpsMode::explicit_value;
    cfg.eps = *a.eps;
  }
  const auto r = dbscan(d, cfg);
  if (r.knee && r.knee->fallback) warn(r.knee->warning);
  const auto eval = expand_noise(r.labeling.labels);
  save_labels_csv(r.labeling, out_path(c, "labels.csv"), &eval);
  json meta;
  meta["command"] = "dbscan";
  meta["eps"] = r.eps;
  meta["eps_mode"] = a.eps ? "explicit" : "knee";
  meta["min_pts"] = r.min_pts;
  meta["n_clusters"] = r.n_clusters;
  meta["n_noise"] = r.n_noise;
  write_json(out_path(c, "metadata.json"), meta);
}

// eval ----------------------------------------------------------------------

struct EvalArgs {
  std::string truth;
  std::string predicted;
};

std::vector<int> labels_in_order(const Labeling& reference, const Labeling& other) {
  std::unordered_map<std::string, int> by_id;
  for (std::size_t i = 0; i < other.ids.size(); ++i) by_id.emplace(other.ids[i], other.labels[i]);
  if (by_id.size() != reference.ids.size()) throw ConfigError("label files cover different observations");
  std::vector<int> out;
  out.reserve(reference.ids.size());
  for (const auto& id : reference.ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw ConfigError("observation '" + id + "' missing from predicted labels");
    out.push_back(it->second);
  }
  return out;
}

void run_eval(const Common& c, const EvalArgs& a) {
  const auto truth = load_labels_csv(a.truth);
  const auto pred = load_labels_csv(a.predicted);
  const auto raw = labels_in_order(truth, pred);
  std::size_t noise = 0;
  int clusters = 0;
  for (int l : raw) {
    noise += l < 0;
    clusters = std::max(clusters, l + 1);
  }
  const double value = ami(truth.labels, expand_noise(raw));
  write_json(out_path(c, "metrics.json"), metrics_json(value, static_cast<std::size_t>(clusters), noise));
  std::cout << "ami " << format_double(value) << '\n';
}

// pipeline ------------------------------------------------------------------

struct PipelineArgs {
  GraphInput graph;
  std::string attrs;
  std::string truth;
  std::string method = "ge+tsne";
  std::optional<double> eps;
  std::size_t min_pts = 4;
  double perplexity = 30.0;
  std::string backend = "auto";
  double tolerance = 1e-8;
};

void run_pipeline_cmd(const Common& c, const PipelineArgs& a) {
  PipelineSpec spec;
  spec.method = parse_method(a.method);
  spec.seed = c.seed;
  spec.threads = c.threads;
  spec.distance.backend = parse_backend(a.backend);
  spec.distance.solver.tolerance = a.tolerance;
  spec.tsne.perplexity = a.perplexity;
  spec.dbscan.min_pts = a.min_pts;
  if (a.eps) {
    spec.dbscan.eps_mode = EpsMode::explicit_value;
    spec.dbscan.eps = *a.eps;
  }
  if (uses_graph(spec.method) && a.graph.path.empty())
    throw ConfigError("method '" + a.method + "' needs --graph");
  if (!uses_graph(spec.method) && !a.graph.path.empty())
    throw ConfigError("method '" + a.method + "' does not use --graph");

  const auto attrs = load_attributes_csv(a.attrs);
  PipelineResult r;
  if (uses_graph(spec.method)) {
    const auto g = load_graph(a.graph);
    if (g.supra) {
      r = run_pipeline(&*g.supra, align_to_graph(attrs, g.graph), spec);
      r.metadata["laplacian"] = "supra";
      r.metadata["coupling"] = a.graph.coupling;
    } else {
      r = run_pipeline(&g.graph, attrs, spec);
    }
  } else {
    r = run_pipeline(static_cast<const Graph*>(nullptr), attrs, spec);
  }
  for (const auto& w : r.warnings) warn(w);

  save_labels_csv(r.labels, out_path(c, "labels.csv"), &r.eval_labels);
  if (r.embedding) {
    write_file(out_path(c, "embedding.csv"), format_embedding_csv(*r.embedding));
    write_file(out_path(c, "embedding.svg"),
               render_scatter(r.embedding->coords, r.labels.labels, to_string(spec.method) + " clusters"));
  }
  json metrics;
  if (!a.truth.empty()) {
    const auto truth = load_labels_csv(a.truth);
    const Labeling predicted{r.labels.ids, r.eval_labels};
    metrics = metrics_json(ami(truth.labels, labels_in_order(truth, predicted)), r.n_clusters, r.n_noise);
  } else {
    metrics = {{"n_clusters", r.n_clusters}, {"n_noise", r.n_noise}};
  }
  write_json(out_path(c, "metrics.json"), metrics);
  r.metadata["command"] = "pipeline";
  write_json(out_path(c, "metadata.json"), r.metadata);
}

// validate ------------------------------------------------------------------

struct ValidateArgs {
  std::size_t runs = 10;
  std::size_t min_pts = 4;
  std::vector<std::string> methods;
  std::vector<double> sigma, dout, nodes, nobs;
};

void run_validate(const Common& c, const ValidateArgs& a) {
  ValidationOptions o;
  o.out_dir = c.out;
  o.runs = a.runs;
  o.threads = c.threads;
  o.base.seed = c.seed;
  o.pipeline.dbscan.min_pts = a.min_pts;
  if (!a.methods.empty()) {
    o.methods.clear();
    for (const auto& m : a.methods) o.methods.push_back(parse_method(m));
  }
  if (!a.sigma.empty()) o.sigma_values = a.sigma;
  if (!a.dout.empty()) o.dout_values = a.dout;
  if (!a.nodes.empty()) o.nodes_values = a.nodes;
  if (!a.nobs.empty()) o.nobs_values = a.nobs;
  const auto report = reproduce_validation(o);
  for (const auto& line : report.incomplete) warn("incomplete cell: " + line);
  for (const auto& [m, cols] : report.table) {
    std::cout << to_string(m);
    for (double v : cols) std::cout << ' ' << format_double(v);
    std::cout << '\n';
  }
}

// bench-runtime -------------------------------------------------------------

struct BenchArgs {
  std::string mode = "nodes";
  std::vector<double> sizes;
  std::size_t pairs = 10;
  std::size_t fixed_nodes = 20000;
};

json fit_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent}, {"ci95_low", f.ci_low}, {"ci95_high", f.ci_high},
          {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

void run_bench(const Common& c, const BenchArgs& a) {
  BenchConfig cfg;
  cfg.mode = parse_bench_mode(a.mode);
  cfg.seed = c.seed;
  cfg.pairs_per_size = a.pairs;
  cfg.fixed_nodes = a.fixed_nodes;
  cfg.sizes = a.sizes;
  if (cfg.sizes.empty())
    cfg.sizes = cfg.mode == BenchMode::nodes ? std::vector<double>{1e2, 3e2, 1e3, 3e3, 1e4, 3e4, 1e5}
                                             : std::vector<double>{4e4, 8e4, 1.6e5, 3.2e5, 6.4e5, 1.28e6};
  if (c.threads > 1) warn("bench-runtime always times on a single worker");
  const auto r = bench_runtime(cfg);
  const std::string mode = to_string(cfg.mode);
  write_file(out_path(c, "bench_" + mode + ".csv"), format_bench_csv(r));
  std::vector<double> x, y;
  for (const auto& p : r.points) {
    x.push_back(static_cast<double>(cfg.mode == BenchMode::nodes ? p.nodes : p.edges));
    y.push_back(p.query_seconds);
  }
  write_file(out_path(c, "bench_" + mode + ".svg"),
             render_loglog_fit(x, y, r.query_fit.intercept, r.query_fit.exponent,
                               cfg.mode == BenchMode::nodes ? "|V|" : "|E|", "seconds per query"));
  json j;
  j["mode"] = mode;
  j["seed"] = c.seed;
  j["pairs_per_size"] = cfg.pairs_per_size;
  j["clusters"] = cfg.clusters;
  if (cfg.mode == BenchMode::nodes) j["avg_degree"] = cfg.avg_degree;
  if (cfg.mode == BenchMode::edges) j["fixed_nodes"] = r.fixed_nodes;
  j["query_fit"] = fit_json(r.query_fit);
  j["total_fit"] = fit_json(r.total_fit);
  write_json(out_path(c, "bench_" + mode + ".json"), j);
  std::cout << mode << " exponent " << format_double(r.query_fit.exponent) << " [" << format_double(r.query_fit.ci_low)
            << ", " << format_double(r.query_fit.ci_high) << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering of node-attribute vectors under the generalized Euclidean graph metric"};
  app.require_subcommand(1);

  Common common;

  SbmArgs sbm;
  auto* sbm_cmd = app.add_subcommand("sbm-gen", "Generate a planted-partition graph with labelled observations");
  add_common(*sbm_cmd, common);
  sbm_cmd->add_option("--k", sbm.cfg.k, "Communities")->capture_default_str();
  sbm_cmd->add_option("--community-size", sbm.cfg.community_size, "Nodes per community")->capture_default_str();
  sbm_cmd->add_option("--avg-degree", sbm.cfg.avg_degree, "Expected degree")->capture_default_str();
  sbm_cmd->add_option("--d-out", sbm.cfg.d_out, "Expected edges leaving a node's community")->capture_default_str();
  sbm_cmd->add_option("--sigma", sbm.cfg.sigma, "Observation noise")->capture_default_str();
  sbm_cmd->add_option("--n-obs", sbm.cfg.n_obs, "Observations")->capture_default_str();
  sbm_cmd->add_option("--max-attempts", sbm.cfg.max_attempts, "Resampling budget for connectivity")
      ->capture_default_str();

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "Pairwise distances between observations");
  add_common(*dist_cmd, common);
  add_graph_options(*dist_cmd, dist.graph, false);
  dist_cmd->add_option("--attrs", dist.attrs, "Attribute CSV")->required()->check(CLI::ExistingFile);
  dist_cmd->add_option("--metric", dist.metric, "ge, euclidean or auto (ge when --graph is given)")
      ->check(CLI::IsMember({"auto", "ge", "euclidean"}))
      ->capture_default_str();
  dist_cmd->add_option("--backend", dist.backend, "dense, solver or auto")
      ->check(CLI::IsMember({"auto", "dense", "solver"}))
      ->capture_default_str();
  dist_cmd->add_option("--tolerance", dist.tolerance, "Solver relative residual")->capture_default_str();

  TsneArgs tsne;
  auto* tsne_cmd = app.add_subcommand("tsne", "Two-dimensional tSNE embedding of a distance matrix");
  add_common(*tsne_cmd, common);
  tsne_cmd->add_option("--dist", tsne.dist, "Distance CSV")->required()->check(CLI::ExistingFile);
  tsne_cmd->add_option("--perplexity", tsne.cfg.perplexity)->capture_default_str();
  tsne_cmd->add_option("--iterations", tsne.cfg.iterations)->capture_default_str();
  tsne_cmd->add_option("--learning-rate", tsne.cfg.learning_rate, "0 selects max(n / 12, 50)")->capture_default_str();
  tsne_cmd->add_option("--exaggeration", tsne.cfg.exaggeration)->capture_default_str();

  DbscanArgs db;
  auto* db_cmd = app.add_subcommand("dbscan", "DBSCAN over a distance matrix or an embedding");
  add_common(*db_cmd, common);
  db_cmd->add_option("--dist", db.dist, "Distance CSV")->check(CLI::ExistingFile);
  db_cmd->add_option("--embedding", db.embedding, "Embedding CSV (Euclidean distances)")->check(CLI::ExistingFile);
  db_cmd->add_option("--eps", db.eps, "Neighbourhood radius (knee of the k-distance curve if omitted)")
      ->check(CLI::PositiveNumber);
  db_cmd->add_option("--min-pts", db.min_pts, "Core threshold, self included")->capture_default_str();

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Adjusted mutual information between two labelings");
  add_common(*ev_cmd, common);
  ev_cmd->add_option("--truth", ev.truth, "Reference labels CSV")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--labels", ev.predicted, "Predicted labels CSV (noise -1)")->required()->check(CLI::ExistingFile);

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Distances, optional tSNE and DBSCAN in one run");
  add_common(*pipe_cmd, common);
  add_graph_options(*pipe_cmd, pipe.graph, false);
  pipe_cmd->add_option("--attrs", pipe.attrs, "Attribute CSV")->required()->check(CLI::ExistingFile);
  pipe_cmd->add_option("--truth", pipe.truth, "Labels CSV to score against")->check(CLI::ExistingFile);
  pipe_cmd->add_option("--method", pipe.method, "baseline, ge, tsne or ge+tsne")->capture_default_str();
  pipe_cmd->add_option("--eps", pipe.eps, "DBSCAN radius (knee if omitted)")->check(CLI::PositiveNumber);
  pipe_cmd->add_option("--min-pts", pipe.min_pts)->capture_default_str();
  pipe_cmd->add_option("--perplexity", pipe.perplexity)->capture_default_str();
  pipe_cmd->add_option("--backend", pipe.backend, "dense, solver or auto")
      ->check(CLI::IsMember({"auto", "dense", "solver"}))
      ->capture_default_str();
  pipe_cmd->add_option("--tolerance", pipe.tolerance, "Solver relative residual")->capture_default_str();

  ValidateArgs val;
  auto* val_cmd = app.add_subcommand("validate", "Synthetic sweeps over sigma, d_out, |V| and |O|");
  add_common(*val_cmd, common);
  val_cmd->add_option("--runs", val.runs)->capture_default_str();
  val_cmd->add_option("--min-pts", val.min_pts)->capture_default_str();
  val_cmd->add_option("--methods", val.methods)->delimiter(',');
  val_cmd->add_option("--sigma-values", val.sigma)->delimiter(',');
  val_cmd->add_option("--dout-values", val.dout)->delimiter(',');
  val_cmd->add_option("--nodes-values", val.nodes)->delimiter(',');
  val_cmd->add_option("--nobs-values", val.nobs)->delimiter(',');

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench-runtime", "Time solver-backed GE queries and fit a power law");
  add_common(*bench_cmd, common);
  bench_cmd->add_option("--mode", bench.mode)->check(CLI::IsMember({"nodes", "edges"}))->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "|V| (nodes) or target |E| (edges), ascending")->delimiter(',');
  bench_cmd->add_option("--pairs", bench.pairs, "Queries per size")->capture_default_str();
  bench_cmd->add_option("--fixed-nodes", bench.fixed_nodes, "|V| in edges mode")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* cmd : app.get_subcommands())
      if (!common.config.empty()) apply_config(*cmd, common.config);
    fs::create_directories(common.out);
    if (sbm_cmd->parsed()) run_sbm_gen(common, sbm);
    if (dist_cmd->parsed()) run_dist(common, dist);
    if (tsne_cmd->parsed()) run_tsne(common, tsne);
    if (db_cmd->parsed()) run_dbscan(common, db);
    if (ev_cmd->parsed()) run_eval(common, ev);
    if (pipe_cmd->parsed()) run_pipeline_cmd(common, pipe);
    if (val_cmd->parsed()) run_validate(common, val);
    if (bench_cmd->parsed()) run_bench(common, bench);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
