#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geclust/attributes.hpp"
#include "geclust/graph.hpp"

namespace geclust {

/// Planted-partition benchmark: k equal communities, Bernoulli edges, and
/// observations whose values are high on one community and low elsewhere.
struct SbmConfig {
  std::size_t k = 4;
  std::size_t community_size = 50;
  double avg_degree = 20.0;
  /// Expected number of a node's edges leaving its community.
  double d_out = 2.0;
  double sigma = 1.0;
  std::size_t n_obs = 300;
  std::uint64_t seed = 1;
  std::size_t max_attempts = 100;

  std::size_t nodes() const noexcept { return k * community_size; }
  double p_in() const;
  double p_out() const;
  /// Throws ConfigError.
  void validate() const;
};

struct SbmGraph {
  Graph graph;
  /// Community per node.
  std::vector<int> node_truth;
  std::size_t attempts = 1;
};

/// One Bernoulli draw of the block model from `stream_seed`; may be disconnected.
SbmGraph sample_sbm(const SbmConfig& cfg, std::uint64_t stream_seed);

/// Resamples the whole graph on a fresh stream until it is connected. Throws
/// GraphError after cfg.max_attempts failures.
SbmGraph generate_sbm_graph(const SbmConfig& cfg);

struct Observations {
  AttributeMatrix attributes;
  /// Community per observation.
  std::vector<int> truth;
};

/// Observation i belongs to community i mod k. Own-community entries are
/// U[0.5, 1), the rest U[0, 0.5); Gaussian(0, sigma) noise is added to every
/// entry without clipping.
Observations generate_observations(const SbmConfig& cfg, std::span<const int> node_truth);

struct LabeledDataset {
  Graph graph;
  AttributeMatrix attributes;
  Labeling truth;
  std::vector<int> node_truth;
};

LabeledDataset generate_dataset(const SbmConfig& cfg);

}  // namespace geclust
