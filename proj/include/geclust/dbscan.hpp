#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geclust/attributes.hpp"

namespace geclust {

enum class EpsMode { explicit_value, knee };

struct DbscanConfig {
  EpsMode eps_mode = EpsMode::knee;
  /// Used when eps_mode is explicit_value.
  double eps = 0.0;
  /// Neighbourhood size (including the point itself) that makes a point core.
  std::size_t min_pts = 4;
};

struct KneeResult {
  double eps = 0.0;
  /// True when the k-distance curve was flat and the median was returned.
  bool fallback = false;
  std::string warning;
  /// Sorted ascending.
  std::vector<double> k_distances;
};

/// Distance from each point to its min_pts-th nearest point (itself counted
/// first), sorted; eps is the curve value farthest below the chord joining
/// the curve endpoints, both axes scaled to [0, 1]. A flat curve, or one that
/// never dips below its chord, falls back to the median with a warning.
KneeResult knee_eps(const DistanceMatrix& d, std::size_t min_pts);

struct DbscanResult {
  Labeling labeling;
  std::vector<bool> core;
  double eps = 0.0;
  std::size_t min_pts = 0;
  std::size_t n_clusters = 0;
  std::size_t n_noise = 0;
  std::optional<KneeResult> knee;
};

/// Classical DBSCAN over a precomputed matrix. Neighbourhoods are closed balls
/// (d <= eps). Clusters are numbered in order of their lowest-index core point;
/// a border point reachable from several clusters joins the one owning its
/// lowest-index core neighbour. Noise is labelled -1.
DbscanResult dbscan(const DistanceMatrix& d, double eps, std::size_t min_pts);
DbscanResult dbscan(const DistanceMatrix& d, const DbscanConfig& cfg);

/// Replaces each noise label with a fresh singleton cluster id.
std::vector<int> expand_noise(const std::vector<int>& labels);

}  // namespace geclust
