#include <doctest.h>

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

#include "geclust/ami.hpp"
#include "geclust/dbscan.hpp"
#include "geclust/ge_metric.hpp"

using namespace geclust;

namespace {

DistanceMatrix line_points(const std::vector<double>& x) {
  RowMatrix m(x.size(), 1);
  for (std::size_t i = 0; i < x.size(); ++i) m(i, 0) = x[i];
  return euclidean_distances(m);
}

RowMatrix blobs(std::size_t per, std::uint64_t seed, double spread = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0, spread);
  RowMatrix m(3 * per, 2);
  const double centres[3][2] = {{0, 0}, {5, 0}, {0, 5}};
  for (std::size_t i = 0; i < 3 * per; ++i) {
    m(i, 0) = centres[i / per][0] + normal(rng);
    m(i, 1) = centres[i / per][1] + normal(rng);
  }
  return m;
}

// Textbook queue-based DBSCAN straight on coordinates.
struct Reference {
  std::vector<int> labels;
  std::vector<bool> core;
};

Reference reference_dbscan(const RowMatrix& x, double eps, std::size_t min_pts) {
  const auto n = static_cast<std::size_t>(x.rows());
  auto region = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
      if ((x.row(i) - x.row(j)).norm() <= eps) out.push_back(j);
    return out;
  };
  Reference r{std::vector<int>(n, -2), std::vector<bool>(n)};
  for (std::size_t i = 0; i < n; ++i) r.core[i] = region(i).size() >= min_pts;
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.labels[i] != -2 || !r.core[i]) continue;
    std::deque<std::size_t> queue{i};
    r.labels[i] = cluster;
    while (!queue.empty()) {
      const auto p = queue.front();
      queue.pop_front();
      if (!r.core[p]) continue;
      for (auto q : region(p))
        if (r.labels[q] == -2 || r.labels[q] == -1) {
          if (r.labels[q] == -2) queue.push_back(q);
          r.labels[q] = cluster;
        }
    }
    ++cluster;
  }
  for (auto& l : r.labels)
    if (l == -2) l = -1;
  return r;
}

}  // namespace

TEST_CASE("hand-executed 1D example") {
  const auto d = line_points({0, 0.1, 10, 10.1});
  const auto r = dbscan(d, 0.5, 2);
  CHECK(r.labeling.labels == std::vector<int>{0, 0, 1, 1});
  CHECK(r.n_clusters == 2);
  CHECK(r.n_noise == 0);
}

TEST_CASE("degenerate inputs") {
  CHECK(dbscan(line_points({3}), 1.0, 2).labeling.labels == std::vector<int>{-1});
  const auto same = dbscan(line_points({2, 2, 2, 2, 2}), 0.5, 5);
  CHECK(same.labeling.labels == std::vector<int>(5, 0));
  CHECK(same.n_noise == 0);
}

TEST_CASE("border point joins the cluster of its lowest-index core neighbour") {
  // point 4 sits between two dense groups and reaches a core point of each
  const auto d = line_points({0, 0.2, 0.4, 0.6, 1.5, 2.4, 2.6, 2.8, 3.0});
  const auto r = dbscan(d, 1.0, 4);
  CHECK(r.core[3]);
  CHECK(r.core[5]);
  CHECK_FALSE(r.core[4]);
  CHECK(r.labeling.labels[4] == r.labeling.labels[3]);
  CHECK(r.n_clusters == 2);
}

TEST_CASE("matches a reference implementation on core and noise points") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = blobs(30, seed, 0.6);
    const auto d = euclidean_distances(x);
    const double eps = 0.3 + 0.05 * static_cast<double>(seed);
    const auto got = dbscan(d, eps, 5);
    const auto ref = reference_dbscan(x, eps, 5);
    CHECK(got.core == ref.core);
    std::vector<int> core_got, core_ref;
    for (std::size_t i = 0; i < ref.labels.size(); ++i) {
      CHECK((got.labeling.labels[i] == -1) == (ref.labels[i] == -1));
      if (ref.core[i]) {
        core_got.push_back(got.labeling.labels[i]);
        core_ref.push_back(ref.labels[i]);
      }
    }
    if (!core_ref.empty()) CHECK(ami(core_ref, core_got) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("knee separates far-apart blobs") {
  // three tight blobs on a line, 100 apart
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  RowMatrix pts(60, 2);
  for (Eigen::Index i = 0; i < 60; ++i) pts.row(i) = Eigen::RowVector2d(i / 20 * 100.0 + jitter(rng), jitter(rng));
  const auto d = euclidean_distances(pts);
  const auto r = dbscan(d, DbscanConfig{});
  REQUIRE(r.knee.has_value());
  CHECK_FALSE(r.knee->fallback);
  CHECK(r.eps < 100.0);
  CHECK(r.n_clusters == 3);
}

TEST_CASE("flat k-distance curve falls back to the median") {
  DistanceMatrix d;
  d.ids = index_ids(6);
  d.values = Eigen::MatrixXd::Constant(6, 6, 2.0);
  d.values.diagonal().setZero();
  const auto k = knee_eps(d, 3);
  CHECK(k.fallback);
  CHECK(k.eps == 2.0);
  CHECK_FALSE(k.warning.empty());

  const auto grid = knee_eps(line_points({0, 0.5, 1.0, 1.5, 2.0, 2.5}), 2);
  CHECK(grid.fallback);
  CHECK(grid.eps == 0.5);
}

TEST_CASE("row permutation preserves core status and clustering") {
  const auto x = blobs(25, 4, 0.7);
  std::vector<std::size_t> perm(x.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(6));
  RowMatrix y(x.rows(), 2);
  for (std::size_t i = 0; i < perm.size(); ++i) y.row(i) = x.row(perm[i]);
  const auto a = dbscan(euclidean_distances(x), DbscanConfig{});
  const auto b = dbscan(euclidean_distances(y), DbscanConfig{});
  CHECK(a.eps == b.eps);
  std::vector<int> la, lb;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    CHECK(a.core[perm[i]] == b.core[i]);
    la.push_back(a.labeling.labels[perm[i]]);
    lb.push_back(b.labeling.labels[i]);
  }
  CHECK(ami(expand_noise(la), expand_noise(lb)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("larger eps never adds noise") {
  const auto d = euclidean_distances(blobs(20, 7, 1.0));
  std::size_t previous = d.size() + 1;
  for (double eps = 0.1; eps < 3.0; eps += 0.1) {
    const auto r = dbscan(d, eps, 4);
    CHECK(r.n_noise <= previous);
    previous = r.n_noise;
  }
}

TEST_CASE("noise expansion") {
  CHECK(expand_noise({0, -1, 1, -1, 0}) == std::vector<int>{0, 2, 1, 3, 0});
}
