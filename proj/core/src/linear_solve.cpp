#include "invasion/linear_solve.hpp"

#include <string>

#include "invasion/errors.hpp"

namespace invasion {

void SparseDirectSolver::factorize(const SparseMatrix& A) {
  lu_.analyzePattern(A);
  analyzed_ = true;
  refactorize(A);
}

void SparseDirectSolver::refactorize(const SparseMatrix& A) {
  if (!analyzed_) {
    factorize(A);
    return;
  }
  lu_.factorize(A);
  if (lu_.info() != Eigen::Success) {
    throw SolverError("sparse LU factorization failed: " + lu_.lastErrorMessage());
  }
  A_ = A;
  factored_ = true;
}

Vector SparseDirectSolver::solve(const Vector& b, double rel_tol) const {
  if (!factored_) throw SolverError("solve called before factorize");
  const double bnorm = b.norm();
  Vector x = lu_.solve(b);
  if (bnorm == 0.0) return x;
  Vector r = b - A_ * x;
  for (int it = 0; it < 2 && r.norm() > rel_tol * bnorm; ++it) {
    x += lu_.solve(r);
    r = b - A_ * x;
  }
  const double rel = r.norm() / bnorm;
  if (!(rel <= rel_tol)) {
    throw SolverError("linear solve relative residual " + std::to_string(rel) +
                      " exceeds tolerance");
  }
  return x;
}

Vector solve_sparse(const SparseMatrix& A, const Vector& b, double rel_tol) {
  SparseDirectSolver s;
  s.factorize(A);
  return s.solve(b, rel_tol);
}

}  // namespace invasion
