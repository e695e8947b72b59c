#include "invasion/micro_dynamics.hpp"

#include <cmath>

#include "invasion/errors.hpp"

namespace invasion {

double MicroSolution::mass(std::size_t l) const {
  const auto& m = levels.at(l);
  const double hz = 1.0 / n_elems;
  double s = 0.0;
  for (int e = 0; e < n_elems; ++e) s += 0.5 * hz * (m[e] + m[e + 1]);
  return s;
}

double compute_source(const NodalScalarField& c, const CutClassification& cuts,
                      const ActiveSet& active, const Vec2& x, double R_m) {
  const GridMesh& mesh = cuts.mesh();
  const double h = mesh.h();
  double num = 0.0;
  double den = 0.0;
  for (const auto& piece : ball_pieces(mesh, x, R_m)) {
    den += total_weight(cut_quadrature(h, piece.poly));
    if (!active.is_active_cell(piece.cell)) continue;
    const CellCut& cut = cuts.cell(piece.cell);
    auto integrate = [&](const QuadratureSet& q) {
      for (const auto& p : q) num += p.w * c.eval_in_cell(piece.cell, p.x);
    };
    if (cut.tag == CellTag::Inside) {
      integrate(cut_quadrature(h, piece.poly));
    } else {
      for (const auto& inside : cut.inside) integrate(double_cut_quadrature(h, piece.poly, inside));
    }
  }
  if (!(den > 0.0)) throw GeometryError("empty source ball quadrature");
  return num / den;
}

MicroSolution micro_solve(double A, const MicroParams& params) {
  if (!(params.n_elems >= 2) || params.n_elems % 2 != 0) {
    throw Error("micro mesh needs an even number of elements");
  }
  if (!(params.n_steps >= 1)) throw Error("micro time steps must be positive");
  const int ne = params.n_elems;
  const int nn = ne + 1;
  const double hz = 1.0 / ne;
  const double dtau = params.dT / params.n_steps;
  const double kappa = params.diffusion();

  // Tridiagonal (M + dtau*kappa*K); M consistent P1 mass, K stiffness.
  std::vector<double> diag(nn), off(nn - 1);
  for (int i = 0; i < nn; ++i) {
    const double elems = (i == 0 || i == ne) ? 1.0 : 2.0;
    diag[i] = elems * (hz / 3.0 + dtau * kappa / hz);
  }
  for (int i = 0; i < ne; ++i) off[i] = hz / 6.0 - dtau * kappa / hz;

  // Load of A on [0, 1/2]; z = 1/2 is a node.
  std::vector<double> load(nn, 0.0);
  for (int e = 0; e < ne / 2; ++e) {
    load[e] += 0.5 * hz * A;
    load[e + 1] += 0.5 * hz * A;
  }

  // Thomas factorization, reused for every step.
  std::vector<double> cprime(nn - 1), dinv(nn);
  dinv[0] = 1.0 / diag[0];
  for (int i = 0; i + 1 < nn; ++i) {
    cprime[i] = off[i] * dinv[i];
    const double d = diag[i + 1] - off[i] * cprime[i];
    if (d == 0.0 || !std::isfinite(d)) throw SolverError("micro tridiagonal solve broke down");
    dinv[i + 1] = 1.0 / d;
  }

  MicroSolution sol;
  sol.n_elems = ne;
  sol.dtau = dtau;
  sol.amplitude = A;
  sol.levels.assign(params.n_steps + 1, std::vector<double>(nn, 0.0));
  std::vector<double> rhs(nn), y(nn);
  for (int l = 0; l < params.n_steps; ++l) {
    const auto& m = sol.levels[l];
    for (int i = 0; i < nn; ++i) {
      double mv = (i == 0 || i == ne ? hz / 3.0 : 2.0 * hz / 3.0) * m[i];
      if (i > 0) mv += hz / 6.0 * m[i - 1];
      if (i < ne) mv += hz / 6.0 * m[i + 1];
      rhs[i] = mv + dtau * load[i];
    }
    y[0] = rhs[0] * dinv[0];
    for (int i = 1; i < nn; ++i) y[i] = (rhs[i] - off[i - 1] * y[i - 1]) * dinv[i];
    auto& next = sol.levels[l + 1];
    next[ne] = y[ne];
    for (int i = ne - 1; i >= 0; --i) next[i] = y[i] - cprime[i] * next[i + 1];
  }
  return sol;
}

double flux_integral(const std::vector<double>& m) noexcept {
  double s = 0.0;
  for (std::size_t e = 0; e + 1 < m.size(); ++e) s += 0.5 * (m[e + 1] * m[e + 1] - m[e] * m[e]);
  return s;
}

double velocity_magnitude(const MicroSolution& sol, double c_vel, const MicroParams& params) {
  const std::size_t L = sol.levels.size();
  if (L == 0) return 0.0;
  double integral = 0.0;
  for (std::size_t l = 0; l + 1 < L; ++l) {
    integral += 0.5 * sol.dtau * (flux_integral(sol.levels[l]) + flux_integral(sol.levels[l + 1]));
  }
  return c_vel / (params.dT * params.eps) * integral;
}

}  // namespace invasion
