#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "geclust/graph.hpp"

namespace geclust {

struct SolverOptions {
  /// Target relative residual ||Lx - b|| <= tolerance * ||b||.
  double tolerance = 1e-8;
  /// 0 selects 2n + 100.
  std::size_t max_iterations = 0;
};

struct SolveResult {
  Eigen::VectorXd x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Solves L x = b for a connected-graph Laplacian with Jacobi-preconditioned
/// conjugate gradients. b is projected orthogonal to the constant vector
/// before solving and x is returned with zero mean. Immutable once built, so
/// one handle can serve concurrent solves.
class LaplacianSolver {
 public:
  explicit LaplacianSolver(LaplacianView laplacian, SolverOptions options = {});

  /// Throws SolverError (carrying the achieved residual) when the target is
  /// not met within max_iterations.
  SolveResult solve(const Eigen::Ref<const Eigen::VectorXd>& b) const;

  std::size_t dimension() const noexcept { return laplacian_.dimension(); }
  const LaplacianView& laplacian() const noexcept { return laplacian_; }
  const SolverOptions& options() const noexcept { return options_; }

 private:
  LaplacianView laplacian_;
  SolverOptions options_;
  Eigen::VectorXd inv_diagonal_;
};

/// Subtracts the mean in place.
void project_out_constant(Eigen::Ref<Eigen::VectorXd> v);

}  // namespace geclust
