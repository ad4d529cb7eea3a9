#include "geclust/laplacian_solver.hpp"

#include <cmath>
#include <string>

#include "geclust/error.hpp"

namespace geclust {

void project_out_constant(Eigen::Ref<Eigen::VectorXd> v) {
  if (v.size() == 0) return;
  v.array() -= v.mean();
}

LaplacianSolver::LaplacianSolver(LaplacianView laplacian, SolverOptions options)
    : laplacian_(std::move(laplacian)), options_(options) {
  if (!(options_.tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
  const auto n = laplacian_.matrix.rows();
  inv_diagonal_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = laplacian_.matrix.coeff(i, i);
    inv_diagonal_[i] = d > 0.0 ? 1.0 / d : 0.0;
  }
}

SolveResult LaplacianSolver::solve(const Eigen::Ref<const Eigen::VectorXd>& rhs) const {
  const auto n = laplacian_.matrix.rows();
  if (rhs.size() != n)
    throw ConfigError("right-hand side has length " + std::to_string(rhs.size()) + ", expected " + std::to_string(n));
  const auto& L = laplacian_.matrix;

  Eigen::VectorXd b = rhs;
  project_out_constant(b);
  SolveResult result;
  result.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return result;

  const std::size_t max_iter =
      options_.max_iterations ? options_.max_iterations : 2 * static_cast<std::size_t>(n) + 100;
  const double target = options_.tolerance * bnorm;

  Eigen::VectorXd& x = result.x;
  Eigen::VectorXd r = b;
  Eigen::VectorXd z(n), p(n), q(n);
  std::size_t it = 0;
  double true_residual = bnorm;

  // Restarts guard against drift between the recurrence and the true residual.
  for (int restart = 0; restart < 4 && it < max_iter; ++restart) {
    z = inv_diagonal_.cwiseProduct(r);
    p = z;
    double rz = r.dot(z);
    while (it < max_iter && r.norm() > target) {
      q.noalias() = L * p;
      const double pq = p.dot(q);
      if (!(pq > 0.0)) break;
      const double alpha = rz / pq;
      x.noalias() += alpha * p;
      r.noalias() -= alpha * q;
      z = inv_diagonal_.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
      ++it;
    }
    r = b;
    r.noalias() -= L * x;
    true_residual = r.norm();
    if (true_residual <= target) break;
  }

  project_out_constant(x);
  result.iterations = it;
  result.relative_residual = true_residual / bnorm;
  if (true_residual > target)
    throw SolverError("Laplacian solver did not converge: relative residual " +
                          std::to_string(result.relative_residual) + " after " + std::to_string(it) + " iterations",
                      result.relative_residual, it);
  return result;
}

}  // namespace geclust
