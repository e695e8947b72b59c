#pragma once

#include <memory>

#include "invasion/interface_velocity.hpp"
#include "invasion/levelset_geometry.hpp"
#include "invasion/linear_solve.hpp"

namespace invasion {

struct TransportParams {
  /// Streamline-diffusion scale.
  double delta = 0.5;
  /// Time step.
  double k = 0.1;
};

/// Implicit Euler for phi_t + V . grad(phi) = 0 on all of Y with Q1 elements,
/// the velocity frozen per cell and streamline diffusion added to the test
/// function:
///   (phi1, w) + k (V . grad phi1, w + delta V . grad w) = (phi0, w).
/// The sparsity pattern is analysed once and reused across steps.
class TransportSolver {
 public:
  explicit TransportSolver(const GridMesh& mesh);
  ~TransportSolver();
  TransportSolver(TransportSolver&&) noexcept;
  TransportSolver& operator=(TransportSolver&&) noexcept;

  /// V == 0 returns phi unchanged.
  LevelSetField step(const LevelSetField& phi, const VelocityField& V,
                     const TransportParams& params);

  SparseMatrix system_matrix(const VelocityField& V, const TransportParams& params) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LevelSetField transport_step(const LevelSetField& phi, const VelocityField& V,
                             const TransportParams& params);

}  // namespace invasion
