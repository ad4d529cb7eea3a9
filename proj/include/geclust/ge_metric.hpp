#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "geclust/attributes.hpp"
#include "geclust/graph.hpp"
#include "geclust/laplacian_solver.hpp"

namespace geclust {

/// Dense Moore-Penrose pseudoinverse of a connected-graph Laplacian, obtained
/// from its eigendecomposition with the single null eigenpair dropped.
class PseudoinverseCache {
 public:
  static PseudoinverseCache compute(const LaplacianView& laplacian);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(pinv_.rows()); }
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  /// L+.
  const Eigen::MatrixXd& pseudoinverse() const noexcept { return pinv_; }
  /// R with L+ = R R^T (n x (n-1)); rows of O R embed observations so that GE
  /// distances become Euclidean ones.
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }

  /// Binary file holding the fingerprint and the retained eigenpairs.
  void save(const std::string& path) const;
  /// Throws Error when the file's fingerprint differs from `expected_fingerprint`
  /// (skipped if empty).
  static PseudoinverseCache load(const std::string& path, const std::string& expected_fingerprint = {});
  /// Loads `<dir>/<fingerprint>.lpinv` if present, otherwise computes and stores it.
  static PseudoinverseCache load_or_compute(const std::string& dir, const LaplacianView& laplacian);

 private:
  static PseudoinverseCache from_eigenpairs(std::string fingerprint, Eigen::VectorXd values, Eigen::MatrixXd vectors);

  std::string fingerprint_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::MatrixXd pinv_;
  Eigen::MatrixXd factor_;
};

using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// sqrt(max(0, (o1-o2)^T L+ (o1-o2))).
double ge_distance_dense(const PseudoinverseCache& cache, const VectorRef& o1, const VectorRef& o2);

/// Same quantity through one Laplacian solve on the mean-centred difference.
double ge_distance_solver(const LaplacianSolver& solver, const VectorRef& o1, const VectorRef& o2);

enum class Backend { dense, solver, automatic };

Backend parse_backend(const std::string& name);
const char* to_string(Backend backend);

struct DistanceOptions {
  Backend backend = Backend::automatic;
  /// automatic picks dense up to this many nodes, solver above.
  std::size_t dense_max_nodes = 10000;
  SolverOptions solver;
  unsigned threads = 1;
};

/// Backend that `automatic` resolves to for a graph with `nodes` nodes.
Backend resolve_backend(const DistanceOptions& options, std::size_t nodes);

/// All-pairs GE distances between the rows of `attrs`. Each entry is computed
/// independently, so results do not depend on `options.threads`.
DistanceMatrix pairwise_distances(const LaplacianView& laplacian, const AttributeMatrix& attrs,
                                  const DistanceOptions& options = {});
DistanceMatrix pairwise_distances(const Graph& g, const AttributeMatrix& attrs, const DistanceOptions& options = {});
DistanceMatrix pairwise_distances(const PseudoinverseCache& cache, const AttributeMatrix& attrs, unsigned threads = 1);

/// Plain L2 distances between the rows of `values`.
DistanceMatrix euclidean_distances(const RowMatrix& values, std::vector<std::string> ids = {}, unsigned threads = 1);
DistanceMatrix euclidean_distances(const AttributeMatrix& attrs, unsigned threads = 1);

}  // namespace geclust
