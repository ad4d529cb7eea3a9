#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geclust/laplacian_solver.hpp"

namespace geclust {

/// Least-squares fit of ln(y) = intercept + exponent * ln(x).
struct PowerLawFit {
  double intercept = 0.0;
  double exponent = 0.0;
  /// 95% confidence interval on the exponent (Student t, n - 2 dof).
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
};

/// Throws ConfigError with fewer than 4 points or non-positive values.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

enum class BenchMode { nodes, edges };

BenchMode parse_bench_mode(const std::string& name);
const char* to_string(BenchMode mode);

struct BenchConfig {
  BenchMode mode = BenchMode::nodes;
  /// nodes mode: |V| per point; edges mode: target |E| per point.
  std::vector<double> sizes;
  std::size_t pairs_per_size = 10;
  std::uint64_t seed = 1;
  std::size_t clusters = 4;
  /// nodes mode: fixed average degree.
  double avg_degree = 4.0;
  /// Fraction of each node's expected degree pointing outside its community.
  double out_fraction = 0.25;
  /// edges mode: fixed |V|.
  std::size_t fixed_nodes = 20000;
  SolverOptions solver;
};

struct BenchPoint {
  double nominal = 0.0;
  /// Size of the largest connected component actually timed.
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double setup_seconds = 0.0;
  /// Mean wall time of one GE distance query.
  double query_seconds = 0.0;
  double mean_iterations = 0.0;
};

struct BenchResult {
  BenchMode mode = BenchMode::nodes;
  std::vector<BenchPoint> points;
  /// Query time against |V| (nodes mode) or |E| (edges mode).
  PowerLawFit query_fit;
  /// Query plus setup time against the same size.
  PowerLawFit total_fit;
  std::size_t fixed_nodes = 0;
};

/// Times solver-backend GE distances on SBM graphs of growing size. Graph
/// generation is excluded; Laplacian and solver setup are timed separately.
/// Sparse SBMs are rarely connected, so each sampled graph is reduced to its
/// largest connected component and the fit uses the realised sizes.
BenchResult bench_runtime(const BenchConfig& cfg);

std::string format_bench_csv(const BenchResult& result);

}  // namespace geclust
