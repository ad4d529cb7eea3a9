#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "geclust/error.hpp"
#include "geclust/ge_metric.hpp"
#include "geclust/tsne.hpp"

using namespace geclust;

namespace {

DistanceMatrix random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  RowMatrix x(n, dim);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return euclidean_distances(x);
}

double row_perplexity(const std::vector<double>& p) {
  double h = 0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return std::exp2(h);
}

double silhouette(const RowMatrix& y, const std::vector<int>& labels) {
  const auto n = static_cast<std::size_t>(y.rows());
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double same = 0, other = 0;
    std::size_t ns = 0, no = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (y.row(i) - y.row(j)).norm();
      if (labels[i] == labels[j]) {
        same += d;
        ++ns;
      } else {
        other += d;
        ++no;
      }
    }
    const double a = same / ns, b = other / no;
    total += (b - a) / std::max(a, b);
  }
  return total / n;
}

}  // namespace

TEST_CASE("calibration on equidistant neighbours is uniform") {
  const std::vector<double> d(9, 2.0);
  const auto bw = perplexity_calibration(d, 9.0);
  for (double p : conditional_probabilities(d, bw.beta)) CHECK(std::abs(p - 1.0 / 9) < 1e-6);
}

TEST_CASE("calibration reaches the target perplexity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(60);
    for (auto& v : d) v = u(rng);
    const double target = 5.0 + static_cast<double>(trial % 15);
    const auto bw = perplexity_calibration(d, target);
    CHECK(std::abs(row_perplexity(conditional_probabilities(d, bw.beta)) - target) < 1e-4);
  }
}

TEST_CASE("doubling distances divides beta by four") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  std::vector<double> d(40);
  for (auto& v : d) v = u(rng);
  std::vector<double> twice(d);
  for (auto& v : twice) v *= 2;
  const double b1 = perplexity_calibration(d, 12).beta;
  const double b2 = perplexity_calibration(twice, 12).beta;
  CHECK(b2 == doctest::Approx(b1 / 4).epsilon(1e-12));
}

TEST_CASE("joint probabilities form a symmetric distribution") {
  const auto d = random_points(40, 5, 4);
  const auto p = joint_probabilities(d, 10);
  CHECK(std::abs(p.sum() - 1.0) < 1e-10);
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p.minCoeff() >= 0.0);
  CHECK(p.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(joint_probabilities(d, 10, 4) == p);
}

TEST_CASE("analytic gradient matches central differences") {
  const auto d = random_points(10, 3, 12);
  const auto p = joint_probabilities(d, 3);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  RowMatrix y(10, 2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = normal(rng);
  const RowMatrix g = kl_gradient(p, y);
  const double h = 1e-5;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index c = 0; c < 2; ++c) {
      RowMatrix plus = y, minus = y;
      plus(i, c) += h;
      minus(i, c) -= h;
      const double fd = (kl_divergence(p, plus) - kl_divergence(p, minus)) / (2 * h);
      CHECK(std::abs(fd - g(i, c)) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("embedding shape and descent") {
  const auto d = random_points(60, 8, 5);
  TsneConfig cfg;
  cfg.perplexity = 10;
  cfg.iterations = 500;
  const auto e = tsne_embed(d, cfg);
  CHECK(e.coords.rows() == 60);
  CHECK(e.coords.cols() == 2);
  CHECK(e.kl < e.initial_kl);
  CHECK(e.ids == d.ids);
}

TEST_CASE("two separated blocks stay separated") {
  const std::size_t n = 40;
  DistanceMatrix d;
  d.ids = index_ids(n);
  d.values = Eigen::MatrixXd::Constant(n, n, 1.0);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i < n / 2 ? 0 : 1;
    for (std::size_t j = 0; j < n; ++j)
      if ((i < n / 2) != (j < n / 2)) d.values(i, j) = 100.0;
    d.values(i, i) = 0.0;
  }
  TsneConfig cfg;
  cfg.perplexity = 5;
  const auto e = tsne_embed(d, cfg);
  CHECK(silhouette(e.coords, labels) > 0.5);
}

TEST_CASE("perplexity is clipped for small inputs") {
  CHECK(effective_perplexity(30, 10) == 3.0);
  CHECK(effective_perplexity(30, 1000) == 30.0);
  DistanceMatrix tiny;
  tiny.ids = index_ids(3);
  tiny.values = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(tsne_embed(tiny), ConfigError);
  DistanceMatrix zero;
  zero.ids = index_ids(6);
  zero.values = Eigen::MatrixXd::Zero(6, 6);
  CHECK_THROWS_AS(tsne_embed(zero), NumericalError);
}

TEST_CASE("embedding is deterministic and follows row permutations") {
  const auto d = random_points(30, 4, 9);
  TsneConfig cfg;
  cfg.perplexity = 8;
  cfg.iterations = 300;
  const auto a = tsne_embed(d, cfg);
  cfg.threads = 3;
  const auto b = tsne_embed(d, cfg);
  CHECK(a.coords == b.coords);

  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(2));
  DistanceMatrix shuffled;
  shuffled.values.resize(30, 30);
  for (std::size_t i = 0; i < 30; ++i) {
    shuffled.ids.push_back(d.ids[perm[i]]);
    for (std::size_t j = 0; j < 30; ++j) shuffled.values(i, j) = d.values(perm[i], perm[j]);
  }
  const auto c = tsne_embed(shuffled, cfg);
  double worst = 0;
  for (std::size_t i = 0; i < 30; ++i) worst = std::max(worst, (c.coords.row(i) - a.coords.row(perm[i])).norm());
  CHECK(worst < 1e-9);
}
