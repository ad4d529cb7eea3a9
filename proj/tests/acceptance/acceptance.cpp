// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "geclust/ami.hpp"
#include "geclust/bench.hpp"
#include "geclust/ge_metric.hpp"
#include "geclust/sbm.hpp"
#include "geclust/sweep.hpp"
#include "geclust/text.hpp"
#include "geclust/tsne.hpp"

using namespace geclust;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

Eigen::VectorXd gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = normal(rng);
  return v;
}

Graph random_connected(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.2, 5.0);
  GraphBuilder b;
  for (std::size_t i = 1; i < n; ++i) b.add_edge("n" + std::to_string(rng() % i), "n" + std::to_string(i), w(rng));
  const std::size_t extra = rng() % (2 * n);
  for (std::size_t e = 0; e < extra; ++e) {
    const auto u = rng() % n, v = rng() % n;
    if (u != v) b.add_edge("n" + std::to_string(u), "n" + std::to_string(v), w(rng));
  }
  return b.build();
}

// 1 -------------------------------------------------------------------------

Outcome oracle_equivalence() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  std::size_t pairs = 0;
  const std::size_t sizes[] = {50, 200, 500};
  for (std::size_t g = 0; g < 50; ++g) {
    SbmConfig cfg;
    const std::size_t n = sizes[g % 3];
    cfg.k = n == 50 ? 2 : 4;
    cfg.community_size = n / cfg.k;
    cfg.avg_degree = n == 50 ? 10 : 20;
    cfg.d_out = 2;
    cfg.seed = 1000 + g;
    const auto sbm = generate_sbm_graph(cfg);
    const auto lap = build_laplacian(sbm.graph);
    const auto cache = PseudoinverseCache::compute(lap);
    const LaplacianSolver solver(lap);
    for (int p = 0; p < 20; ++p) {
      const auto a = gaussian(n, rng), b = gaussian(n, rng);
      worst = std::max(worst, rel_diff(ge_distance_dense(cache, a, b), ge_distance_solver(solver, a, b)));
      ++pairs;
    }
  }
  return {worst <= 1e-6, std::to_string(pairs) + " pairs on 50 graphs, max relative difference " + fmt("%.2e", worst)};
}

// 2 -------------------------------------------------------------------------

Outcome resistance_fixtures() {
  struct Case {
    std::vector<std::pair<const char*, const char*>> edges;
    std::size_t u, v;
    double expected;
  };
  const Case cases[] = {{{{"a", "b"}}, 0, 1, 1.0},
                        {{{"a", "b"}, {"b", "c"}}, 0, 2, std::sqrt(2.0)},
                        {{{"a", "b"}, {"b", "c"}, {"a", "c"}}, 0, 1, std::sqrt(2.0 / 3.0)}};
  double worst = 0.0;
  for (const auto& c : cases) {
    GraphBuilder b;
    for (auto [u, v] : c.edges) b.add_edge(u, v);
    const auto lap = build_laplacian(b.build());
    const auto n = lap.dimension();
    Eigen::VectorXd o1 = Eigen::VectorXd::Zero(n), o2 = Eigen::VectorXd::Zero(n);
    o1(c.u) = 1.0;
    o2(c.v) = 1.0;
    const auto cache = PseudoinverseCache::compute(lap);
    worst = std::max(worst, std::abs(ge_distance_dense(cache, o1, o2) - c.expected));
    worst = std::max(worst, std::abs(ge_distance_solver(LaplacianSolver(lap), o1, o2) - c.expected));
  }
  return {worst <= 1e-9, "edge 1, path sqrt(2), triangle sqrt(2/3) on both backends, max error " + fmt("%.2e", worst)};
}

// 3 -------------------------------------------------------------------------

Outcome metric_properties() {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal;
  std::map<std::string, int> failures{{"symmetry", 0}, {"translation", 0}, {"homogeneity", 0},
                                      {"weight scaling", 0}, {"triangle", 0}};
  auto tol = [](double scale) { return 1e-9 * std::max(1.0, scale); };
  for (int trial = 0; trial < 1000; ++trial) {
    const Graph g = random_connected(5 + rng() % 26, rng);
    const auto n = g.node_count();
    const auto lap = build_laplacian(g);
    const auto cache = PseudoinverseCache::compute(lap);
    const LaplacianSolver solver(lap);
    const auto a = gaussian(n, rng), b = gaussian(n, rng), c = gaussian(n, rng);
    const double ab = ge_distance_dense(cache, a, b);

    const double sab = ge_distance_solver(solver, a, b);
    if (std::abs(ab - ge_distance_dense(cache, b, a)) > tol(ab) ||
        std::abs(sab - ge_distance_solver(solver, b, a)) > tol(sab))
      ++failures["symmetry"];

    const double shift = 10.0 * normal(rng);
    if (std::abs(ge_distance_dense(cache, a + shift * Eigen::VectorXd::Ones(n), b) - ab) > tol(ab))
      ++failures["translation"];

    const double alpha = 5.0 * normal(rng);
    const double scaled = ge_distance_dense(cache, alpha * a, alpha * b);
    if (std::abs(scaled - std::abs(alpha) * ab) > tol(scaled)) ++failures["homogeneity"];

    const double k = std::exp(2.0 * normal(rng));
    GraphBuilder heavier;
    for (const auto& e : g.edges()) heavier.add_edge(g.node_ids()[e.u], g.node_ids()[e.v], k * e.weight);
    const auto kcache = PseudoinverseCache::compute(build_laplacian(heavier.build()));
    const double kab = ge_distance_dense(kcache, a, b);
    if (std::abs(kab - ab / std::sqrt(k)) > tol(kab)) ++failures["weight scaling"];

    const double ac = ge_distance_dense(cache, a, c), cb = ge_distance_dense(cache, c, b);
    if (ab > ac + cb + tol(ab)) ++failures["triangle"];
  }
  int total = 0;
  std::string detail = "1000 trials each; failures:";
  for (const auto& [name, count] : failures) {
    total += count;
    detail += " " + name + "=" + std::to_string(count);
  }
  return {total == 0, detail};
}

// 4, 5, 6, 9 share sweep results ----------------------------------------------

std::vector<SweepResult> validation_runs;

SweepResult run_sweep(Experiment e, std::vector<double> values, std::vector<Method> methods) {
  SweepConfig cfg;
  cfg.experiment = e;
  cfg.values = std::move(values);
  cfg.runs = 10;
  cfg.methods = std::move(methods);
  cfg.threads = worker_count();
  auto r = sweep(cfg);
  validation_runs.push_back(r);
  return r;
}

std::string incomplete_note(const SweepResult& r) { return r.complete() ? "" : " (some runs failed)"; }

Outcome synthetic_ranking() {
  const auto r = run_sweep(Experiment::sigma, {1.0}, all_methods());
  const double base = r.overall_mean(Method::baseline), ge = r.overall_mean(Method::ge),
               ts = r.overall_mean(Method::tsne), both = r.overall_mean(Method::ge_tsne);
  const bool ok = r.complete() && both > ts && ts >= ge && ge > base && both >= 0.6;
  return {ok, "mean AMI ge+tsne=" + fmt("%.4f", both) + " tsne=" + fmt("%.4f", ts) + " ge=" + fmt("%.4f", ge) +
                  " baseline=" + fmt("%.4f", base) + " (need ge+tsne > tsne >= ge > baseline, ge+tsne >= 0.6)" +
                  incomplete_note(r)};
}

Outcome zero_noise() {
  const auto r = run_sweep(Experiment::sigma, {0.0}, {Method::baseline});
  double worst = 1.0;
  for (const auto& rec : r.records)
    if (rec.ok) worst = std::min(worst, rec.ami);
  const double mean = r.overall_mean(Method::baseline);
  return {r.complete() && mean >= 1.0 - 1e-9,
          "baseline mean AMI " + fmt("%.6f", mean) + ", worst run " + fmt("%.6f", worst) + " (need 1.0)" +
              incomplete_note(r)};
}

double max_deviation(const std::vector<double>& s) {
  if (s.empty()) return INFINITY;
  double mean = 0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  double worst = 0;
  for (double v : s) worst = std::max(worst, std::abs(v - mean));
  return worst;
}

std::string series_text(const std::vector<double>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + fmt("%.3f", s[i]);
  return out + "]";
}

Outcome noise_insensitivity() {
  const auto d = run_sweep(Experiment::dout, {1, 2, 3, 4, 5, 6}, {Method::baseline, Method::tsne});
  const auto v = run_sweep(Experiment::nodes, {100, 200, 400, 800}, {Method::ge});
  const auto sb = d.series(Method::baseline), st = d.series(Method::tsne), sg = v.series(Method::ge);
  const double db = max_deviation(sb), dt = max_deviation(st), dg = max_deviation(sg);
  const bool ok = d.complete() && v.complete() && db < 0.1 && dt < 0.1 && dg < 0.15;
  return {ok, "d_out: baseline " + series_text(sb) + " dev " + fmt("%.3f", db) + ", tsne " + series_text(st) +
                  " dev " + fmt("%.3f", dt) + "; |V|: ge " + series_text(sg) + " dev " + fmt("%.3f", dg) +
                  incomplete_note(d) + incomplete_note(v)};
}

// 7 -------------------------------------------------------------------------

Outcome runtime_scaling() {
  BenchConfig nodes;
  nodes.mode = BenchMode::nodes;
  nodes.sizes = {1e2, 3e2, 1e3, 3e3, 1e4, 3e4, 1e5};
  const auto rn = bench_runtime(nodes);
  BenchConfig edges;
  edges.mode = BenchMode::edges;
  edges.sizes = {4e4, 8e4, 1.6e5, 3.2e5, 6.4e5, 1.28e6};
  const auto re = bench_runtime(edges);
  const double bn = rn.query_fit.exponent, be = re.query_fit.exponent;
  const bool ok = bn >= 1.0 && bn <= 1.6 && be < 1.0;
  return {ok, "|V| exponent " + fmt("%.3f", bn) + " [" + fmt("%.3f", rn.query_fit.ci_low) + ", " +
                  fmt("%.3f", rn.query_fit.ci_high) + "], |E| exponent at |V|=" + std::to_string(re.fixed_nodes) + " " +
                  fmt("%.3f", be) + " [" + fmt("%.3f", re.query_fit.ci_low) + ", " + fmt("%.3f", re.query_fit.ci_high) +
                  "]; with setup: " + fmt("%.3f", rn.total_fit.exponent) + " / " + fmt("%.3f", re.total_fit.exponent)};
}

// 8 -------------------------------------------------------------------------

long double binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long double r = 1;
  for (long long i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r;
}

double oracle_ami(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, long long> ca, cb;
  std::map<std::pair<int, int>, long long> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    ++joint[{a[i], b[i]}];
  }
  const long long total = static_cast<long long>(a.size());
  const long double n = static_cast<long double>(total);
  auto h = [&](const std::map<int, long long>& c) {
    long double s = 0;
    for (const auto& kv : c) s -= kv.second / n * std::log(kv.second / n);
    return s;
  };
  long double mi = 0;
  for (const auto& [k, nij] : joint)
    mi += nij / n * std::log(n * nij / (static_cast<long double>(ca[k.first]) * cb[k.second]));
  long double emi = 0;
  for (const auto& [ka, ai] : ca)
    for (const auto& [kb, bj] : cb)
      for (long long nij = std::max(1LL, ai + bj - total); nij <= std::min(ai, bj); ++nij)
        emi += nij / n * std::log(n * nij / (static_cast<long double>(ai) * bj)) * binomial(ai, nij) *
               binomial(total - ai, bj - nij) / binomial(total, bj);
  const long double ha = h(ca), hb = h(cb);
  if (ha == 0 && hb == 0) return 1.0;
  return static_cast<double>((mi - emi) / ((ha + hb) / 2 - emi));
}

Outcome ami_correctness() {
  std::mt19937_64 rng(808);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 49;
    const int ka = 1 + static_cast<int>(rng() % 7), kb = 1 + static_cast<int>(rng() % 7);
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>(rng() % ka);
      b[i] = rng() % 2 ? a[i] : static_cast<int>(rng() % kb);
    }
    worst = std::max(worst, std::abs(ami(a, b) - oracle_ami(a, b)));
  }
  double sum = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<int> a(100), b(100);
    for (auto& v : a) v = static_cast<int>(rng() % 4);
    for (auto& v : b) v = static_cast<int>(rng() % 4);
    sum += ami(a, b);
  }
  const double mean = sum / 200;
  return {worst <= 1e-10 && std::abs(mean) <= 0.02,
          "max |AMI - oracle| " + fmt("%.2e", worst) + " over 100 pairs; random-label mean " + fmt("%.4f", mean)};
}

// 9 -------------------------------------------------------------------------

Outcome tsne_health() {
  std::mt19937_64 rng(909);
  RowMatrix x(10, 3);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  const auto p = joint_probabilities(euclidean_distances(x), 3.0);
  RowMatrix y(10, 2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = normal(rng);
  const RowMatrix g = kl_gradient(p, y);
  double worst = 0;
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    RowMatrix plus = y, minus = y;
    plus.data()[i] += h;
    minus.data()[i] -= h;
    const double fd = (kl_divergence(p, plus) - kl_divergence(p, minus)) / (2 * h);
    worst = std::max(worst, std::abs(fd - g.data()[i]) / std::max(std::abs(fd), 1e-8));
  }
  std::size_t runs = 0, bad = 0;
  for (const auto& s : validation_runs)
    for (const auto& rec : s.records)
      if (rec.ok && rec.final_kl) {
        ++runs;
        if (!(*rec.final_kl < *rec.initial_kl)) ++bad;
      }
  return {worst <= 1e-4 && runs > 0 && bad == 0, "gradient max relative error " + fmt("%.2e", worst) + "; KL decreased in " +
                                                      std::to_string(runs - bad) + "/" + std::to_string(runs) +
                                                      " tSNE validation runs"};
}

// 10 ------------------------------------------------------------------------

struct CliRun {
  std::string name;
  std::string args;  // without --out/--threads
};

std::map<std::string, std::string> collect_outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".csv" || ext == ".json" || ext == ".edgelist")
      out[fs::relative(entry.path(), dir).string()] = read_file(entry.path().string());
  }
  return out;
}

// bench output is timing; only its deterministic columns are compared
std::string strip_timings(const std::string& name, const std::string& content) {
  if (name.rfind("bench_", 0) != 0) return content;
  if (name.ends_with(".json")) return "";
  std::string out;
  for (auto line : split_lines(content)) {
    const auto f = split(line, ',');
    if (f.size() < 7) continue;
    out += std::string(f[0]) + ',' + std::string(f[1]) + ',' + std::string(f[2]) + ',' + std::string(f[3]) + ',' +
           std::string(f[6]) + '\n';
  }
  return out;
}

Outcome cli_determinism(const std::string& cli, const fs::path& work) {
  fs::remove_all(work);
  fs::create_directories(work);
  const auto data = (work / "data").string();
  if (std::system((cli + " sbm-gen --seed 7 --n-obs 120 --out " + data + " > /dev/null").c_str()) != 0)
    return {false, "sbm-gen failed"};
  const std::string g = " --graph " + data + "/graph.edgelist", a = " --attrs " + data + "/attributes.csv";
  const std::string t = " --truth " + data + "/truth.csv";
  write_file((work / "run.cfg").string(), "method=ge+tsne\nmin-pts=5\nperplexity=20\n");

  const std::vector<CliRun> runs = {
      {"sbm-gen", "sbm-gen --seed 11 --n-obs 80"},
      {"dist-ge-dense", "dist --seed 3" + g + a + " --backend dense"},
      {"dist-ge-solver", "dist --seed 3" + g + a + " --backend solver"},
      {"dist-euclidean", "dist --seed 3" + a},
      {"tsne", "tsne --seed 3 --dist " + (work / "ref" / "dist-ge-dense" / "distances.csv").string()},
      {"dbscan", "dbscan --seed 3 --embedding " + (work / "ref" / "tsne" / "embedding.csv").string()},
      {"eval", "eval --seed 3 --truth " + data + "/truth.csv --labels " +
                   (work / "ref" / "dbscan" / "labels.csv").string()},
      {"pipeline-baseline", "pipeline --seed 5 --method baseline" + a + t},
      {"pipeline-ge", "pipeline --seed 5 --method ge" + g + a + t},
      {"pipeline-tsne", "pipeline --seed 5 --method tsne" + a + t},
      {"pipeline-ge+tsne", "pipeline --seed 5 --method ge+tsne --backend solver" + g + a + t},
      {"pipeline-config", "pipeline --seed 5 --config " + (work / "run.cfg").string() + g + a + t},
      {"validate", "validate --seed 2 --runs 2 --sigma-values 0,1 --dout-values 1,4 --nodes-values 100,200 "
                   "--nobs-values 100,200"},
      {"bench-runtime", "bench-runtime --seed 2 --mode nodes --sizes 100,200,400,800 --pairs 2"},
  };
  std::vector<std::string> mismatched;
  std::size_t files = 0;
  for (const auto& run : runs) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (const auto& [label, threads] : std::vector<std::pair<std::string, int>>{{"ref", 1}, {"repeat", 1}, {"t8", 8}}) {
      const auto dir = work / label / run.name;
      const auto cmd = cli + " " + run.args + " --threads " + std::to_string(threads) + " --out " + dir.string() +
                       " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, run.name + " exited with an error: " + cmd};
      auto files_here = collect_outputs(dir);
      for (auto& [name, content] : files_here) content = strip_timings(name, content);
      outputs.push_back(std::move(files_here));
    }
    if (outputs[0].empty()) return {false, run.name + " wrote no CSV/JSON output"};
    files += outputs[0].size();
    if (outputs[0] != outputs[1] || outputs[0] != outputs[2]) mismatched.push_back(run.name);
  }
  std::string detail = std::to_string(runs.size()) + " invocations, " + std::to_string(files) +
                       " output files compared across repeat and --threads 1/8";
  if (!mismatched.empty()) {
    detail += "; differing:";
    for (const auto& m : mismatched) detail += " " + m;
  }
  detail += " (bench-runtime: timing columns excluded)";
  return {mismatched.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string cli = "geclust";
  std::string work = "acceptance_work";
  std::set<int> only;
  app.add_option("--cli", cli, "Path to the geclust executable");
  app.add_option("--work", work, "Scratch directory for CLI outputs");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::tuple<int, std::string, double, std::function<Outcome()>>> criteria = {
      {1, "GE oracle equivalence", 60, oracle_equivalence},
      {2, "effective-resistance fixtures", 0, resistance_fixtures},
      {3, "metric properties", 0, metric_properties},
      {4, "synthetic ranking", 900, synthetic_ranking},
      {5, "zero-noise degeneracy", 60, zero_noise},
      {6, "network-noise insensitivity", 0, noise_insensitivity},
      {7, "runtime scaling", 1800, runtime_scaling},
      {8, "AMI correctness", 0, ami_correctness},
      {9, "tSNE numerical health", 0, tsne_health},
      {10, "determinism", 0, [&] { return cli_determinism(cli, work); }},
  };
  int failed = 0;
  for (const auto& [id, name, budget, fn] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (budget > 0 && secs > budget) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", budget) + " s budget";
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
