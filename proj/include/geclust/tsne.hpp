#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geclust/attributes.hpp"

namespace geclust {

/// Exact (O(n^2)) t-SNE to two dimensions over a precomputed distance matrix.
struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  /// 0 selects max(n / 12, 50).
  double learning_rate = 0.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  double init_stddev = 1e-4;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct Embedding {
  std::vector<std::string> ids;
  RowMatrix coords;  // n x 2
  double kl = 0.0;
  /// KL(P || Q) at the initial layout, without exaggeration.
  double initial_kl = 0.0;
  double perplexity = 0.0;
  double learning_rate = 0.0;
};

struct Bandwidth {
  /// Precision of the Gaussian kernel on squared distances.
  double beta = 0.0;
  double perplexity = 0.0;
  std::size_t iterations = 0;
  /// Target below the number of equally-near neighbours; the row is uniform
  /// over those neighbours instead.
  bool saturated = false;
};

/// Binary search on beta so that exp(-beta d_j^2) / sum has the target
/// perplexity (|log2 ratio| < `log2_tolerance`). `distances` are the row's
/// off-diagonal entries, unsquared. Throws NumericalError when the target
/// cannot be bracketed within 200 steps.
Bandwidth perplexity_calibration(std::span<const double> distances, double target_perplexity,
                                 double log2_tolerance = 1e-7);

/// Conditional distribution p_{j|i} for a row at the given beta.
std::vector<double> conditional_probabilities(std::span<const double> distances, double beta);

/// Symmetrised affinities P = (P_cond + P_cond^T) / (2n); sums to one.
Eigen::MatrixXd joint_probabilities(const DistanceMatrix& d, double perplexity, unsigned threads = 1);

/// KL(P || Q) with Student-t Q over the layout y.
double kl_divergence(const Eigen::MatrixXd& p, const RowMatrix& y);
/// d KL / d y.
RowMatrix kl_gradient(const Eigen::MatrixXd& p, const RowMatrix& y, unsigned threads = 1);

/// Perplexity actually used for n points: min(requested, (n - 1) / 3).
double effective_perplexity(double requested, std::size_t n);

/// Throws ConfigError for n < 4 or bad hyperparameters and NumericalError for
/// an all-zero distance matrix. Rows are processed in id order internally and
/// each point's initial position is drawn from a stream keyed by its id, so
/// permuting the input rows permutes the output rows identically.
Embedding tsne_embed(const DistanceMatrix& d, const TsneConfig& cfg = {});

}  // namespace geclust
