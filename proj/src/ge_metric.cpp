#include "geclust/ge_metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include <Eigen/Eigenvalues>

#include "geclust/error.hpp"
#include "geclust/parallel.hpp"

namespace geclust {

namespace {

constexpr char kCacheMagic[8] = {'G', 'E', 'L', 'P', 'I', 'N', 'V', '1'};

void check_vectors(std::size_t dim, const VectorRef& o1, const VectorRef& o2) {
  if (static_cast<std::size_t>(o1.size()) != dim || static_cast<std::size_t>(o2.size()) != dim)
    throw ConfigError("attribute vector length does not match the graph dimension " + std::to_string(dim));
  if (!o1.allFinite() || !o2.allFinite()) throw NumericalError("attribute vector contains NaN or Inf");
}

// Upper triangle filled by `entry(i, j)`, mirrored afterwards.
template <typename Entry>
Eigen::MatrixXd symmetric_fill(std::size_t n, unsigned threads, Entry&& entry) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j);
  });
  m.triangularView<Eigen::StrictlyLower>() = m.transpose();
  return m;
}

}  // namespace

PseudoinverseCache PseudoinverseCache::from_eigenpairs(std::string fingerprint, Eigen::VectorXd values,
                                                       Eigen::MatrixXd vectors) {
  PseudoinverseCache c;
  c.fingerprint_ = std::move(fingerprint);
  c.eigenvalues_ = std::move(values);
  c.eigenvectors_ = std::move(vectors);
  const Eigen::VectorXd inv_sqrt = c.eigenvalues_.cwiseSqrt().cwiseInverse();
  c.factor_ = c.eigenvectors_ * inv_sqrt.asDiagonal();
  const auto n = c.eigenvectors_.rows();
  if (c.factor_.cols() == 0)
    c.pinv_ = Eigen::MatrixXd::Zero(n, n);
  else
    c.pinv_ = c.factor_ * c.factor_.transpose();
  return c;
}

PseudoinverseCache PseudoinverseCache::compute(const LaplacianView& laplacian) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(laplacian.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense);
  if (eig.info() != Eigen::Success) throw NumericalError("Laplacian eigendecomposition failed");
  const auto n = dense.rows();
  if (n == 0) throw GraphError("cannot pseudoinvert an empty Laplacian");
  // Connected graph: exactly one null eigenpair, the smallest.
  Eigen::VectorXd values = eig.eigenvalues().tail(n - 1);
  Eigen::MatrixXd vectors = eig.eigenvectors().rightCols(n - 1);
  if (n > 1 && !(values[0] > 1e-12 * std::max(1.0, values[n - 2])))
    throw GraphError("Laplacian has more than one zero eigenvalue: graph is disconnected");
  return from_eigenpairs(laplacian.fingerprint, std::move(values), std::move(vectors));
}

void PseudoinverseCache::save(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(kCacheMagic, sizeof kCacheMagic);
  const std::uint64_t flen = fingerprint_.size();
  const std::uint64_t n = static_cast<std::uint64_t>(eigenvectors_.rows());
  const std::uint64_t k = static_cast<std::uint64_t>(eigenvectors_.cols());
  out.write(reinterpret_cast<const char*>(&flen), sizeof flen);
  out.write(fingerprint_.data(), static_cast<std::streamsize>(flen));
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&k), sizeof k);
  out.write(reinterpret_cast<const char*>(eigenvalues_.data()), static_cast<std::streamsize>(k * sizeof(double)));
  out.write(reinterpret_cast<const char*>(eigenvectors_.data()), static_cast<std::streamsize>(n * k * sizeof(double)));
  if (!out) throw Error("write to '" + path + "' failed");
}

PseudoinverseCache PseudoinverseCache::load(const std::string& path, const std::string& expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  char magic[sizeof kCacheMagic];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + sizeof magic, kCacheMagic)) throw Error("'" + path + "' is not a GE cache file");
  std::uint64_t flen = 0, n = 0, k = 0;
  in.read(reinterpret_cast<char*>(&flen), sizeof flen);
  if (!in || flen > 1024) throw Error("corrupt GE cache file '" + path + "'");
  std::string fingerprint(flen, '\0');
  in.read(fingerprint.data(), static_cast<std::streamsize>(flen));
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&k), sizeof k);
  if (!in || k > n) throw Error("corrupt GE cache file '" + path + "'");
  if (!expected_fingerprint.empty() && fingerprint != expected_fingerprint)
    throw Error("GE cache '" + path + "' belongs to graph " + fingerprint + ", expected " + expected_fingerprint);
  Eigen::VectorXd values(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(k * sizeof(double)));
  in.read(reinterpret_cast<char*>(vectors.data()), static_cast<std::streamsize>(n * k * sizeof(double)));
  if (!in) throw Error("truncated GE cache file '" + path + "'");
  return from_eigenpairs(std::move(fingerprint), std::move(values), std::move(vectors));
}

PseudoinverseCache PseudoinverseCache::load_or_compute(const std::string& dir, const LaplacianView& laplacian) {
  const auto path = (std::filesystem::path(dir) / (laplacian.fingerprint + ".lpinv")).string();
  if (std::filesystem::exists(path)) return load(path, laplacian.fingerprint);
  auto cache = compute(laplacian);
  cache.save(path);
  return cache;
}

double ge_distance_dense(const PseudoinverseCache& cache, const VectorRef& o1, const VectorRef& o2) {
  check_vectors(cache.dimension(), o1, o2);
  const Eigen::VectorXd d = o1 - o2;
  const double q = d.dot(cache.pseudoinverse() * d);
  return std::sqrt(std::max(0.0, q));
}

double ge_distance_solver(const LaplacianSolver& solver, const VectorRef& o1, const VectorRef& o2) {
  check_vectors(solver.dimension(), o1, o2);
  Eigen::VectorXd d = o1 - o2;
  project_out_constant(d);
  const auto result = solver.solve(d);
  return std::sqrt(std::max(0.0, d.dot(result.x)));
}

Backend parse_backend(const std::string& name) {
  if (name == "dense") return Backend::dense;
  if (name == "solver") return Backend::solver;
  if (name == "auto") return Backend::automatic;
  throw ConfigError("unknown backend '" + name + "' (expected dense, solver or auto)");
}

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::dense: return "dense";
    case Backend::solver: return "solver";
    default: return "auto";
  }
}

Backend resolve_backend(const DistanceOptions& options, std::size_t nodes) {
  if (options.backend != Backend::automatic) return options.backend;
  return nodes <= options.dense_max_nodes ? Backend::dense : Backend::solver;
}

DistanceMatrix pairwise_distances(const PseudoinverseCache& cache, const AttributeMatrix& attrs, unsigned threads) {
  check_attributes(attrs);
  if (attrs.cols() != cache.dimension())
    throw ConfigError("attribute matrix has " + std::to_string(attrs.cols()) + " columns, graph has " +
                      std::to_string(cache.dimension()) + " nodes");
  const Eigen::MatrixXd embedded = attrs.values * cache.factor();
  DistanceMatrix d;
  d.ids = attrs.observation_ids;
  d.metric = MetricKind::generalized_euclidean;
  d.values = symmetric_fill(attrs.rows(), threads, [&](std::size_t i, std::size_t j) {
    return (embedded.row(static_cast<Eigen::Index>(i)) - embedded.row(static_cast<Eigen::Index>(j))).norm();
  });
  return d;
}

DistanceMatrix pairwise_distances(const LaplacianView& laplacian, const AttributeMatrix& attrs,
                                  const DistanceOptions& options) {
  check_attributes(attrs);
  if (attrs.cols() != laplacian.dimension())
    throw ConfigError("attribute matrix has " + std::to_string(attrs.cols()) + " columns, graph has " +
                      std::to_string(laplacian.dimension()) + " nodes");
  if (resolve_backend(options, laplacian.dimension()) == Backend::dense)
    return pairwise_distances(PseudoinverseCache::compute(laplacian), attrs, options.threads);

  const LaplacianSolver solver(laplacian, options.solver);
  DistanceMatrix d;
  d.ids = attrs.observation_ids;
  d.metric = MetricKind::generalized_euclidean;
  d.values = symmetric_fill(attrs.rows(), options.threads, [&](std::size_t i, std::size_t j) {
    try {
      return ge_distance_solver(solver, attrs.values.row(static_cast<Eigen::Index>(i)).transpose(),
                                attrs.values.row(static_cast<Eigen::Index>(j)).transpose());
    } catch (const SolverError& e) {
      throw SolverError("pair (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.what(),
                        e.relative_residual(), e.iterations());
    }
  });
  return d;
}

DistanceMatrix pairwise_distances(const Graph& g, const AttributeMatrix& attrs, const DistanceOptions& options) {
  return pairwise_distances(build_laplacian(g), align_to_graph(attrs, g), options);
}

DistanceMatrix euclidean_distances(const RowMatrix& values, std::vector<std::string> ids, unsigned threads) {
  if (!values.allFinite()) throw NumericalError("input contains NaN or Inf");
  DistanceMatrix d;
  d.ids = ids.empty() ? index_ids(static_cast<std::size_t>(values.rows())) : std::move(ids);
  d.metric = MetricKind::euclidean;
  d.values = symmetric_fill(static_cast<std::size_t>(values.rows()), threads, [&](std::size_t i, std::size_t j) {
    return (values.row(static_cast<Eigen::Index>(i)) - values.row(static_cast<Eigen::Index>(j))).norm();
  });
  return d;
}

DistanceMatrix euclidean_distances(const AttributeMatrix& attrs, unsigned threads) {
  check_attributes(attrs);
  return euclidean_distances(attrs.values, attrs.observation_ids, threads);
}

}  // namespace geclust
