#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace invasion {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

inline constexpr double kLinearRelativeResidual = 1e-10;

/// Direct sparse solve (SuperLU-style LU) with up to two steps of iterative
/// refinement. Throws SolverError if the factorization fails or the relative
/// residual stays above `rel_tol`.
class SparseDirectSolver {
 public:
  void factorize(const SparseMatrix& A);
  /// Reuses the ordering from a previous call; A must have the same pattern.
  void refactorize(const SparseMatrix& A);
  Vector solve(const Vector& b, double rel_tol = kLinearRelativeResidual) const;
  bool has_pattern() const noexcept { return analyzed_; }

 private:
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  SparseMatrix A_;
  bool factored_ = false;
  bool analyzed_ = false;
};

Vector solve_sparse(const SparseMatrix& A, const Vector& b,
                    double rel_tol = kLinearRelativeResidual);

}  // namespace invasion
