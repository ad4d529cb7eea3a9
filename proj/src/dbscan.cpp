#include "geclust/dbscan.hpp"

#include <algorithm>
#include <cmath>

#include "geclust/error.hpp"

namespace geclust {

KneeResult knee_eps(const DistanceMatrix& d, std::size_t min_pts) {
  check_distance_matrix(d);
  const std::size_t n = d.size();
  if (min_pts < 1) throw ConfigError("min_pts must be at least 1");
  if (n <= min_pts) throw ConfigError("knee selection needs more points than min_pts");

  KneeResult out;
  out.k_distances.resize(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = d(i, j);
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(min_pts - 1), row.end());
    out.k_distances[i] = row[min_pts - 1];
  }
  std::sort(out.k_distances.begin(), out.k_distances.end());
  const auto& k = out.k_distances;
  const double lo = k.front();
  const double hi = k.back();
  if (!(hi - lo > 1e-12 * std::max(1.0, std::abs(hi)))) {
    out.fallback = true;
    out.eps = n % 2 ? k[n / 2] : 0.5 * (k[n / 2 - 1] + k[n / 2]);
    out.warning = "k-distance curve is flat; using the median k-distance as eps";
    return out;
  }
  // Chord from (0, 0) to (1, 1) in normalised coordinates. The knee is where
  // the curve turns upwards, so only points below the chord qualify.
  double best = 0.0;
  std::size_t best_idx = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    const double y = (k[i] - lo) / (hi - lo);
    const double dist = (x - y) / std::sqrt(2.0);
    if (dist > best) {
      best = dist;
      best_idx = i;
    }
  }
  if (best_idx == n) {
    out.fallback = true;
    out.eps = n % 2 ? k[n / 2] : 0.5 * (k[n / 2 - 1] + k[n / 2]);
    out.warning = "k-distance curve never bends upwards; using the median k-distance as eps";
    return out;
  }
  out.eps = k[best_idx];
  return out;
}

DbscanResult dbscan(const DistanceMatrix& d, double eps, std::size_t min_pts) {
  check_distance_matrix(d);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("DBSCAN eps must be positive and finite");
  if (min_pts < 1) throw ConfigError("DBSCAN min_pts must be at least 1");
  const std::size_t n = d.size();

  DbscanResult out;
  out.eps = eps;
  out.min_pts = min_pts;
  out.labeling.ids = d.ids.empty() ? index_ids(n) : d.ids;
  out.labeling.labels.assign(n, -1);
  out.core.assign(n, false);

  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (d(i, j) <= eps) neighbors[i].push_back(j);
    out.core[i] = neighbors[i].size() >= min_pts;
  }

  auto& labels = out.labeling.labels;
  int next = 0;
  std::vector<std::size_t> frontier;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (!out.core[seed] || labels[seed] != -1) continue;
    // Core points reachable from `seed`, expanded in ascending index order.
    labels[seed] = next;
    frontier.assign(1, seed);
    while (!frontier.empty()) {
      std::vector<std::size_t> next_frontier;
      for (auto u : frontier)
        for (auto v : neighbors[u])
          if (out.core[v] && labels[v] == -1) {
            labels[v] = next;
            next_frontier.push_back(v);
          }
      std::sort(next_frontier.begin(), next_frontier.end());
      frontier = std::move(next_frontier);
    }
    ++next;
  }
  // Border points: neighbour lists are ascending, so the first core neighbour
  // has the lowest index.
  for (std::size_t i = 0; i < n; ++i) {
    if (out.core[i]) continue;
    for (auto j : neighbors[i])
      if (out.core[j]) {
        labels[i] = labels[j];
        break;
      }
  }
  out.n_clusters = static_cast<std::size_t>(next);
  out.n_noise = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), -1));
  return out;
}

DbscanResult dbscan(const DistanceMatrix& d, const DbscanConfig& cfg) {
  if (cfg.eps_mode == EpsMode::explicit_value) return dbscan(d, cfg.eps, cfg.min_pts);
  auto knee = knee_eps(d, cfg.min_pts);
  double eps = knee.eps;
  // A zero knee (duplicated points) would make every ball empty; use the
  // smallest positive k-distance instead.
  if (!(eps > 0.0)) {
    const auto it = std::upper_bound(knee.k_distances.begin(), knee.k_distances.end(), 0.0);
    eps = it != knee.k_distances.end() ? *it : 1.0;
  }
  auto out = dbscan(d, eps, cfg.min_pts);
  out.knee = std::move(knee);
  return out;
}

std::vector<int> expand_noise(const std::vector<int>& labels) {
  int next = labels.empty() ? 0 : std::max(0, *std::max_element(labels.begin(), labels.end()) + 1);
  std::vector<int> out(labels);
  for (auto& l : out)
    if (l < 0) l = next++;
  return out;
}

}  // namespace geclust
