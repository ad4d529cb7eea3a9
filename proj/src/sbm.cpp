#include "geclust/sbm.hpp"

#include <random>
#include <string>

#include "geclust/error.hpp"
#include "geclust/seed.hpp"

namespace geclust {

namespace {

// Visits each index in [begin, end) independently with probability p.
template <typename Rng, typename Fn>
void bernoulli_range(Rng& rng, std::size_t begin, std::size_t end, double p, Fn&& fn) {
  if (p <= 0.0 || begin >= end) return;
  if (p >= 1.0) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::geometric_distribution<std::size_t> skip(p);
  std::size_t pos = begin;
  while (true) {
    pos += skip(rng);
    if (pos >= end) return;
    fn(pos);
    ++pos;
  }
}

}  // namespace

double SbmConfig::p_in() const {
  return community_size > 1 ? (avg_degree - d_out) / static_cast<double>(community_size - 1) : 0.0;
}

double SbmConfig::p_out() const {
  const std::size_t outside = nodes() - community_size;
  return outside > 0 ? d_out / static_cast<double>(outside) : 0.0;
}

void SbmConfig::validate() const {
  if (k < 1) throw ConfigError("SBM needs at least one community");
  if (community_size < 2) throw ConfigError("SBM community size must be at least 2");
  if (!(d_out >= 0.0) || d_out > avg_degree) throw ConfigError("SBM needs 0 <= d_out <= avg_degree");
  if (k == 1 && d_out > 0.0) throw ConfigError("a single-community SBM cannot have outside connections");
  if (!(sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
  if (n_obs < k) throw ConfigError("need at least one observation per community (n_obs >= k)");
  if (p_in() > 1.0)
    throw ConfigError("avg_degree - d_out exceeds community_size - 1: intra-community edge probability above 1");
  if (p_out() > 1.0) throw ConfigError("d_out too large for the number of outside nodes");
  if (max_attempts < 1) throw ConfigError("max_attempts must be positive");
}

SbmGraph sample_sbm(const SbmConfig& cfg, std::uint64_t stream_seed) {
  cfg.validate();
  std::mt19937_64 rng(stream_seed);
  const std::size_t n = cfg.nodes();
  const double p_in = cfg.p_in();
  const double p_out = cfg.p_out();

  GraphBuilder b;
  SbmGraph out;
  out.node_truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.add_node("v" + std::to_string(i));
    out.node_truth[i] = static_cast<int>(i / cfg.community_size);
  }
  // Communities are contiguous index blocks, so each node's later partners
  // split into one intra range and one inter range.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t block_end = (i / cfg.community_size + 1) * cfg.community_size;
    bernoulli_range(rng, i + 1, block_end, p_in, [&](std::size_t j) { b.add_edge(i, j, 1.0); });
    bernoulli_range(rng, block_end, n, p_out, [&](std::size_t j) { b.add_edge(i, j, 1.0); });
  }
  out.graph = b.build();
  return out;
}

SbmGraph generate_sbm_graph(const SbmConfig& cfg) {
  cfg.validate();
  for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    auto sampled = sample_sbm(cfg, derive_seed(derive_seed(cfg.seed, "sbm-graph"), attempt));
    if (validate_graph(sampled.graph).ok()) {
      sampled.attempts = attempt + 1;
      return sampled;
    }
  }
  throw GraphError("SBM graph still disconnected after " + std::to_string(cfg.max_attempts) +
                   " attempts; increase avg_degree or d_out");
}

Observations generate_observations(const SbmConfig& cfg, std::span<const int> node_truth) {
  cfg.validate();
  if (node_truth.size() != cfg.nodes()) throw ConfigError("node_truth length does not match the SBM size");
  std::mt19937_64 rng(derive_seed(cfg.seed, "sbm-observations"));
  std::uniform_real_distribution<double> high(0.5, 1.0);
  std::uniform_real_distribution<double> low(0.0, 0.5);
  std::normal_distribution<double> noise(0.0, cfg.sigma > 0.0 ? cfg.sigma : 1.0);

  const std::size_t n = cfg.nodes();
  Observations out;
  auto& a = out.attributes;
  a.values.resize(static_cast<Eigen::Index>(cfg.n_obs), static_cast<Eigen::Index>(n));
  a.column_ids.reserve(n);
  for (std::size_t j = 0; j < n; ++j) a.column_ids.push_back("v" + std::to_string(j));
  out.truth.resize(cfg.n_obs);
  for (std::size_t i = 0; i < cfg.n_obs; ++i) {
    const int community = static_cast<int>(i % cfg.k);
    out.truth[i] = community;
    a.observation_ids.push_back("o" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      double v = node_truth[j] == community ? high(rng) : low(rng);
      if (cfg.sigma > 0.0) v += noise(rng);
      a.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return out;
}

LabeledDataset generate_dataset(const SbmConfig& cfg) {
  auto g = generate_sbm_graph(cfg);
  auto obs = generate_observations(cfg, g.node_truth);
  LabeledDataset d;
  d.graph = std::move(g.graph);
  d.node_truth = std::move(g.node_truth);
  d.truth.ids = obs.attributes.observation_ids;
  d.truth.labels = std::move(obs.truth);
  d.attributes = std::move(obs.attributes);
  return d;
}

}  // namespace geclust
