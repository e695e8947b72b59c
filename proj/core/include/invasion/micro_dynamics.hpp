#pragma once

#include <vector>

#include "invasion/grid.hpp"
#include "invasion/levelset_geometry.hpp"
#include "invasion/macro_dynamics.hpp"

namespace invasion {

struct MicroParams {
  double D2 = 0.001;
  double eps = 0.01;
  /// Splitting step, also the micro final time.
  double dT = 0.1;
  int n_steps = 10;
  int n_elems = 64;

  double diffusion() const noexcept { return D2 / (eps * eps); }
};

/// Scaled enzyme profile on (0,1), every micro time level kept.
struct MicroSolution {
  int n_elems = 0;
  double dtau = 0.0;
  double amplitude = 0.0;
  /// levels[l][i]: value at node z_i = i / n_elems at time l * dtau.
  std::vector<std::vector<double>> levels;

  /// Integral of level l over (0,1).
  double mass(std::size_t l) const;
};

/// Ball average I_B(c)/I_B(1) of the cancer density around x, with c taken as
/// zero outside the active inside region. Throws GeometryError for an empty ball.
double compute_source(const NodalScalarField& c, const CutClassification& cuts,
                      const ActiveSet& active, const Vec2& x, double R_m);

/// Implicit Euler, P1 elements, zero-flux ends, source A on [0, 1/2].
MicroSolution micro_solve(double A, const MicroParams& params);

/// Sum over elements of the exact P1 integral of m dm/dz.
double flux_integral(const std::vector<double>& m) noexcept;

/// (c_vel / (dT eps)) * trapezoid-in-time of flux_integral. Signed.
double velocity_magnitude(const MicroSolution& sol, double c_vel, const MicroParams& params);

}  // namespace invasion
