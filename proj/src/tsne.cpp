#include "geclust/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "geclust/error.hpp"
#include "geclust/parallel.hpp"
#include "geclust/seed.hpp"

namespace geclust {

namespace {

constexpr std::size_t kMaxCalibrationSteps = 200;

// Entropy (nats) of p_j ∝ exp(-beta * (s_j - s_min)); fills p when given.
double kernel_entropy(std::span<const double> sq, double s_min, double beta, std::vector<double>* p) {
  double sum = 0.0;
  double weighted = 0.0;
  for (double s : sq) {
    const double shifted = s - s_min;
    const double w = std::exp(-beta * shifted);
    sum += w;
    weighted += w * shifted;
  }
  if (p) {
    p->resize(sq.size());
    for (std::size_t j = 0; j < sq.size(); ++j) (*p)[j] = std::exp(-beta * (sq[j] - s_min)) / sum;
  }
  return std::log(sum) + beta * weighted / sum;
}

}  // namespace

Bandwidth perplexity_calibration(std::span<const double> distances, double target, double log2_tolerance) {
  if (distances.size() < 2) throw NumericalError("perplexity calibration needs at least two neighbours");
  if (!(target > 0.0)) throw ConfigError("perplexity must be positive");
  double scale = 0.0;
  for (double d : distances) {
    if (!std::isfinite(d) || d < 0.0) throw NumericalError("distances must be finite and non-negative");
    scale = std::max(scale, d * d);
  }
  if (scale == 0.0) throw NumericalError("all distances in the row are zero; perplexity is undefined");

  // Work on squared distances divided by their maximum: the search becomes
  // scale free and beta is rescaled at the end.
  std::vector<double> sq(distances.size());
  for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = distances[j] * distances[j] / scale;
  const double s_min = *std::min_element(sq.begin(), sq.end());
  const double target_entropy = std::log(target);

  // The perplexity falls towards the number of nearest ties as beta grows. A
  // target at or below that count is met by the limiting distribution.
  const auto ties = static_cast<double>(std::count(sq.begin(), sq.end(), s_min));
  if (std::log2(ties) - std::log2(target) > -log2_tolerance) {
    double next = std::numeric_limits<double>::infinity();
    for (double v : sq)
      if (v > s_min) next = std::min(next, v);
    Bandwidth out;
    out.beta = (std::isinf(next) ? 1.0 : 800.0 / (next - s_min)) / scale;
    out.perplexity = ties;
    out.saturated = std::log2(ties) - std::log2(target) >= log2_tolerance;
    return out;
  }

  double beta = 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  Bandwidth out;
  for (std::size_t step = 1; step <= kMaxCalibrationSteps; ++step) {
    const double h = kernel_entropy(sq, s_min, beta, nullptr);
    const double diff = (h - target_entropy) / std::log(2.0);
    out.iterations = step;
    if (std::abs(diff) < log2_tolerance) {
      out.beta = beta / scale;
      out.perplexity = std::exp(h);
      return out;
    }
    if (diff > 0.0) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
    if (!std::isfinite(beta) || (std::isfinite(hi) && hi - lo <= std::numeric_limits<double>::epsilon() * hi)) break;
  }
  throw NumericalError("perplexity calibration could not reach perplexity " + std::to_string(target));
}

std::vector<double> conditional_probabilities(std::span<const double> distances, double beta) {
  std::vector<double> sq(distances.size());
  for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = distances[j] * distances[j];
  std::vector<double> p;
  kernel_entropy(sq, sq.empty() ? 0.0 : *std::min_element(sq.begin(), sq.end()), beta, &p);
  return p;
}

double effective_perplexity(double requested, std::size_t n) {
  return std::min(requested, (static_cast<double>(n) - 1.0) / 3.0);
}

Eigen::MatrixXd joint_probabilities(const DistanceMatrix& d, double perplexity, unsigned threads) {
  const std::size_t n = d.size();
  Eigen::MatrixXd cond = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<double> row;
    row.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.push_back(d(i, j));
    Bandwidth bw;
    try {
      bw = perplexity_calibration(row, perplexity);
    } catch (const NumericalError& e) {
      throw NumericalError("row " + std::to_string(i) + " (" + (d.ids.empty() ? std::to_string(i) : d.ids[i]) +
                           "): " + e.what());
    }
    const auto p = conditional_probabilities(row, bw.beta);
    for (std::size_t j = 0, k = 0; j < n; ++j)
      if (j != i) cond(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p[k++];
  });
  Eigen::MatrixXd joint = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
  return joint;
}

namespace {

// Student-t kernel 1 / (1 + |y_i - y_j|^2), zero diagonal, plus its sum.
struct Kernel {
  Eigen::MatrixXd num;
  double z = 0.0;
};

Kernel student_kernel(const RowMatrix& y, unsigned threads) {
  const auto n = y.rows();
  Kernel k;
  k.num.resize(n, n);
  std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iu) {
    const auto i = static_cast<Eigen::Index>(iu);
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) {
        k.num(j, i) = 0.0;
        continue;
      }
      const double dx = y(i, 0) - y(j, 0);
      const double dy = y(i, 1) - y(j, 1);
      const double v = 1.0 / (1.0 + dx * dx + dy * dy);
      k.num(j, i) = v;
      s += v;
    }
    row_sums[iu] = s;
  });
  for (double s : row_sums) k.z += s;
  return k;
}

RowMatrix gradient_from_kernel(const Eigen::MatrixXd& p, double p_scale, const RowMatrix& y, const Kernel& k,
                               unsigned threads) {
  const auto n = y.rows();
  RowMatrix grad(n, 2);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iu) {
    const auto i = static_cast<Eigen::Index>(iu);
    double gx = 0.0;
    double gy = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double num = k.num(j, i);
      const double mult = (p_scale * p(j, i) - num / k.z) * num;
      gx += mult * (y(i, 0) - y(j, 0));
      gy += mult * (y(i, 1) - y(j, 1));
    }
    grad(i, 0) = 4.0 * gx;
    grad(i, 1) = 4.0 * gy;
  });
  return grad;
}

double kl_from_kernel(const Eigen::MatrixXd& p, const Kernel& k) {
  const auto n = p.rows();
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double pij = p(j, i);
      if (pij <= 0.0) continue;
      const double qij = std::max(k.num(j, i) / k.z, std::numeric_limits<double>::min());
      kl += pij * std::log(pij / qij);
    }
  return kl;
}

}  // namespace

double kl_divergence(const Eigen::MatrixXd& p, const RowMatrix& y) { return kl_from_kernel(p, student_kernel(y, 1)); }

RowMatrix kl_gradient(const Eigen::MatrixXd& p, const RowMatrix& y, unsigned threads) {
  return gradient_from_kernel(p, 1.0, y, student_kernel(y, threads), threads);
}

Embedding tsne_embed(const DistanceMatrix& d, const TsneConfig& cfg) {
  check_distance_matrix(d);
  const std::size_t n = d.size();
  if (n < 4) throw ConfigError("t-SNE needs at least 4 observations, got " + std::to_string(n));
  if (!(cfg.perplexity > 0.0) || !(cfg.exaggeration > 0.0) || cfg.iterations == 0 || !(cfg.init_stddev > 0.0) ||
      cfg.learning_rate < 0.0)
    throw ConfigError("t-SNE hyperparameters must be positive");
  if (d.values.isZero(0.0)) throw NumericalError("all pairwise distances are zero; t-SNE input is degenerate");

  const auto ids = d.ids.empty() ? index_ids(n) : d.ids;

  // Canonical order: sorted by id, ties by position.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  DistanceMatrix canon;
  canon.values.resize(d.values.rows(), d.values.cols());
  canon.ids.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    canon.ids[a] = ids[order[a]];
    for (std::size_t b = 0; b < n; ++b)
      canon.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = d(order[a], order[b]);
  }

  Embedding out;
  out.perplexity = effective_perplexity(cfg.perplexity, n);
  out.learning_rate = cfg.learning_rate > 0.0 ? cfg.learning_rate : std::max(static_cast<double>(n) / 12.0, 50.0);
  const Eigen::MatrixXd p = joint_probabilities(canon, out.perplexity, cfg.threads);

  const auto rows = static_cast<Eigen::Index>(n);
  RowMatrix y(rows, 2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    std::mt19937_64 rng(derive_seed(cfg.seed, canon.ids[static_cast<std::size_t>(i)]));
    std::normal_distribution<double> init(0.0, cfg.init_stddev);
    y(i, 0) = init(rng);
    y(i, 1) = init(rng);
  }
  y.rowwise() -= y.colwise().mean();

  out.initial_kl = kl_from_kernel(p, student_kernel(y, cfg.threads));

  RowMatrix update = RowMatrix::Zero(rows, 2);
  RowMatrix gains = RowMatrix::Ones(rows, 2);
  constexpr double kMinGain = 0.01;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const bool exaggerating = it < cfg.exaggeration_iterations;
    const double momentum = exaggerating ? cfg.initial_momentum : cfg.final_momentum;
    const Kernel k = student_kernel(y, cfg.threads);
    const RowMatrix grad = gradient_from_kernel(p, exaggerating ? cfg.exaggeration : 1.0, y, k, cfg.threads);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index c = 0; c < 2; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (update(i, c) > 0.0);
        gains(i, c) = std::max(same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2, kMinGain);
        update(i, c) = momentum * update(i, c) - out.learning_rate * gains(i, c) * grad(i, c);
        y(i, c) += update(i, c);
      }
    y.rowwise() -= y.colwise().mean();
  }
  out.kl = kl_from_kernel(p, student_kernel(y, cfg.threads));
  if (!y.allFinite()) throw NumericalError("t-SNE diverged (non-finite coordinates)");

  out.ids = ids;
  out.coords.resize(rows, 2);
  for (std::size_t a = 0; a < n; ++a) out.coords.row(static_cast<Eigen::Index>(order[a])) = y.row(static_cast<Eigen::Index>(a));
  return out;
}

}  // namespace geclust
