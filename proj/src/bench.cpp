#include "geclust/bench.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include <boost/math/distributions/students_t.hpp>

#include "geclust/error.hpp"
#include "geclust/ge_metric.hpp"
#include "geclust/sbm.hpp"
#include "geclust/seed.hpp"
#include "geclust/text.hpp"

namespace geclust {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("power-law fit: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 4) throw ConfigError("power-law fit needs at least 4 sizes, got " + std::to_string(n));
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ConfigError("power-law fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("power-law fit needs at least two distinct sizes");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    sse += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  const double se = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  const boost::math::students_t dist(static_cast<double>(n - 2));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.exponent - t * se;
  fit.ci_high = fit.exponent + t * se;
  return fit;
}

BenchMode parse_bench_mode(const std::string& name) {
  if (name == "nodes") return BenchMode::nodes;
  if (name == "edges") return BenchMode::edges;
  throw ConfigError("unknown bench mode '" + name + "' (expected nodes or edges)");
}

const char* to_string(BenchMode mode) { return mode == BenchMode::nodes ? "nodes" : "edges"; }

BenchResult bench_runtime(const BenchConfig& cfg) {
  if (cfg.sizes.size() < 4) throw ConfigError("bench_runtime needs at least 4 sizes for a fit");
  for (std::size_t i = 1; i < cfg.sizes.size(); ++i)
    if (!(cfg.sizes[i] > cfg.sizes[i - 1])) throw ConfigError("bench sizes must be strictly ascending");
  if (cfg.pairs_per_size == 0) throw ConfigError("pairs_per_size must be positive");
  if (cfg.clusters < 1) throw ConfigError("bench needs at least one cluster");

  using clock = std::chrono::steady_clock;
  BenchResult result;
  result.mode = cfg.mode;
  result.fixed_nodes = cfg.mode == BenchMode::edges ? cfg.fixed_nodes : 0;

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const double size = cfg.sizes[si];
    SbmConfig sbm;
    sbm.k = cfg.clusters;
    sbm.n_obs = cfg.clusters;
    sbm.sigma = 0.0;
    if (cfg.mode == BenchMode::nodes) {
      sbm.community_size = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(size / static_cast<double>(cfg.clusters))));
      sbm.avg_degree = cfg.avg_degree;
    } else {
      sbm.community_size = std::max<std::size_t>(2, cfg.fixed_nodes / cfg.clusters);
      sbm.avg_degree = 2.0 * size / static_cast<double>(sbm.nodes());
    }
    sbm.d_out = cfg.clusters > 1 ? cfg.out_fraction * sbm.avg_degree : 0.0;
    const auto stream = derive_seed(derive_seed(cfg.seed, to_string(cfg.mode)), si);
    const Graph g = largest_component(sample_sbm(sbm, stream).graph);

    BenchPoint point;
    point.nominal = size;
    point.nodes = g.node_count();
    point.edges = g.edge_count();

    const auto setup_start = clock::now();
    const LaplacianSolver solver(build_laplacian(g), cfg.solver);
    point.setup_seconds = std::chrono::duration<double>(clock::now() - setup_start).count();

    std::mt19937_64 rng(derive_seed(stream, "pairs"));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::VectorXd a(n), b(n);
    double query_total = 0.0;
    double iterations = 0.0;
    for (std::size_t p = 0; p < cfg.pairs_per_size; ++p) {
      for (Eigen::Index i = 0; i < n; ++i) a[i] = unit(rng);
      for (Eigen::Index i = 0; i < n; ++i) b[i] = unit(rng);
      const auto start = clock::now();
      const double d = ge_distance_solver(solver, a, b);
      query_total += std::chrono::duration<double>(clock::now() - start).count();
      if (!std::isfinite(d)) throw NumericalError("non-finite GE distance in benchmark");
      Eigen::VectorXd diff = a - b;
      project_out_constant(diff);
      iterations += static_cast<double>(solver.solve(diff).iterations);
    }
    point.query_seconds = query_total / static_cast<double>(cfg.pairs_per_size);
    point.mean_iterations = iterations / static_cast<double>(cfg.pairs_per_size);
    result.points.push_back(point);
  }

  std::vector<double> xs, query, total;
  for (const auto& p : result.points) {
    xs.push_back(static_cast<double>(cfg.mode == BenchMode::nodes ? p.nodes : p.edges));
    query.push_back(p.query_seconds);
    total.push_back(p.query_seconds + p.setup_seconds);
  }
  result.query_fit = fit_power_law(xs, query);
  result.total_fit = fit_power_law(xs, total);
  return result;
}

std::string format_bench_csv(const BenchResult& result) {
  std::string out = "mode,nominal,nodes,edges,setup_seconds,query_seconds,mean_iterations\n";
  for (const auto& p : result.points)
    out += std::string(to_string(result.mode)) + ',' + format_double(p.nominal) + ',' + std::to_string(p.nodes) + ',' +
           std::to_string(p.edges) + ',' + format_double(p.setup_seconds) + ',' + format_double(p.query_seconds) + ',' +
           format_double(p.mean_iterations) + '\n';
  return out;
}

}  // namespace geclust
