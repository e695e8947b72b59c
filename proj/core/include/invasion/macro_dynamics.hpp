#pragma once

#include <cstddef>
#include <vector>

#include "invasion/grid.hpp"
#include "invasion/levelset_geometry.hpp"
#include "invasion/linear_solve.hpp"

namespace invasion {

/// Cut cells whose inside fraction is below this value leave the active mesh.
inline constexpr double kSuppressionThreshold = 0.01;

enum class Mu1Mode { Constant, EcmDependent };

struct MacroParams {
  double D1 = 0.0043;
  double eta = 0.06;
  double mu1_star = 0.25;
  double mu2 = 0.15;
  double alpha = 1.5;
  Mu1Mode mu1_mode = Mu1Mode::Constant;
  double newton_tol = 1e-6;
  int max_newton_iters = 10;
};

/// Proliferation rate. In ECM mode v is clamped to [0, 1] first and
/// mu1(v) = mu1* exp(1 + 1/((1-v)^2 - 1)), with mu1(0) = 0.
double mu1(double v, const MacroParams& p) noexcept;
/// d mu1 / dv, zero where the clamp is active.
double mu1_derivative(double v, const MacroParams& p) noexcept;

/// Cells and vertices that carry the macro unknowns.
struct ActiveSet {
  std::vector<std::size_t> cells;
  /// Active vertices in increasing index order; position = dof number.
  std::vector<std::size_t> nodes;
  /// Per vertex: dof number or -1.
  std::vector<int> dof_of_node;
  /// Per cell: 1 if active.
  std::vector<char> cell_active;
  std::size_t suppressed = 0;

  std::size_t num_dofs() const noexcept { return nodes.size(); }
  bool is_active_cell(std::size_t c) const noexcept { return cell_active[c] != 0; }
  bool is_active_node(std::size_t v) const noexcept { return dof_of_node[v] >= 0; }
};

/// Inside cells plus cut cells with theta >= threshold.
ActiveSet make_active_set(const CutClassification& cuts,
                          double threshold = kSuppressionThreshold);

/// Cancer and ECM nodal fields over all of Y. Values are meaningful on the
/// active nodes; elsewhere c = 0 and v keeps its prescribed initial value.
struct MacroState {
  NodalScalarField c;
  NodalScalarField v;
  double t = 0.0;
  ActiveSet active;
};

NodalScalarField initial_cancer(const GridMesh& mesh, const Vec2& center, double R);
NodalScalarField initial_ecm(const GridMesh& mesh);

/// c0 = max(0, (R - |x - center|)/R), v0 = 0.3 sin(2 pi |x|) + 0.5, active set
/// from the level set of the same disc.
MacroState initial_conditions(const GridMesh& mesh, const Vec2& center, double R);

struct ExtensionReport {
  std::size_t new_nodes = 0;
  std::size_t suppressed = 0;
};

/// Moves `state` from its active set to the one of `new_cuts`. Nodes already
/// active keep their values (cells cut at both times extend their own bilinear
/// polynomial). Newly active nodes take v = v0 and c from the bilinear
/// polynomial of the nearest previously active cell, clamped to >= 0. Throws
/// DegenerateDomainError when the new inside area drops below one cell.
ExtensionReport extend_state(MacroState& state, const CutClassification& new_cuts,
                             const NodalScalarField& v0);

/// Quadrature of one active cell, with basis data at each point.
struct CellQuadrature {
  std::size_t cell;
  std::array<std::size_t, 4> vertices;
  std::vector<double> weights;
  std::vector<std::array<double, 4>> basis;
  /// Physical gradients of the four basis functions.
  std::vector<std::array<Vec2, 4>> grad;
};

/// Inside-region quadrature of every active cell of `cuts`.
std::vector<CellQuadrature> build_active_quadrature(const CutClassification& cuts,
                                                    const ActiveSet& active);

/// Discrete implicit-Euler macro system on a fixed active domain. Unknown vector
/// layout: [c dofs..., v dofs...].
class MacroProblem {
 public:
  MacroProblem(const CutClassification& cuts, const ActiveSet& active, const MacroParams& params,
               double k, const NodalScalarField& c_prev, const NodalScalarField& v_prev);

  std::size_t num_dofs() const noexcept { return ndof_; }
  Vector pack(const NodalScalarField& c, const NodalScalarField& v) const;
  void unpack(const Vector& U, NodalScalarField& c, NodalScalarField& v) const;

  Vector residual(const Vector& U) const;
  SparseMatrix jacobian(const Vector& U) const;

 private:
  template <bool WithJacobian>
  void assemble(const Vector& U, Vector* R, std::vector<Eigen::Triplet<double>>* J) const;

  const ActiveSet& active_;
  MacroParams params_;
  double k_;
  std::size_t ndof_;
  std::vector<CellQuadrature> quad_;
  Vector c_prev_;
  Vector v_prev_;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

/// One implicit-Euler step on the domain of `state.active` (which must match
/// `cuts`). The current values act as both the extended old state and the
/// Newton initial guess. Newton uses the exact Jacobian, always takes at least
/// one step, and stops once the residual l2 norm is below params.newton_tol.
/// Throws ConvergenceError after params.max_newton_iters iterations.
NewtonReport macro_step(MacroState& state, const CutClassification& cuts, double k,
                        const MacroParams& params);

}  // namespace invasion
