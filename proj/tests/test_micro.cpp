#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "invasion/errors.hpp"
#include "invasion/micro_dynamics.hpp"

using namespace invasion;

namespace {

double naive_flux(const std::vector<double>& m) {
  // Two-point Gauss per element is exact for the quadratic m m'.
  const std::size_t n = m.size() - 1;
  const double h = 1.0 / n;
  double s = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const double slope = (m[e + 1] - m[e]) / h;
    for (double g : {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)}) {
      s += 0.5 * h * (m[e] + g * (m[e + 1] - m[e])) * slope;
    }
  }
  return s;
}

}  // namespace

TEST(Micro, ZeroSource) {
  const auto sol = micro_solve(0.0, MicroParams{});
  ASSERT_EQ(sol.levels.size(), 11u);
  for (const auto& lvl : sol.levels) {
    ASSERT_EQ(lvl.size(), 65u);
    for (double m : lvl) EXPECT_EQ(m, 0.0);
  }
}

TEST(Micro, MassIdentity) {
  const MicroParams p;
  for (double A : {0.25, 1.0, 3.0}) {
    const auto sol = micro_solve(A, p);
    for (std::size_t l = 0; l < sol.levels.size(); ++l) {
      EXPECT_NEAR(sol.mass(l), l * sol.dtau * A / 2, 1e-10) << A << " " << l;
    }
  }
  EXPECT_NEAR(micro_solve(1.0, p).mass(10), 0.05, 1e-10);
}

TEST(Micro, NonnegativeAndSourceSideHigher) {
  MicroParams p;
  for (double A : {1e-3, 1.0}) {
    for (int n_elems : {2, 16, 64}) {
      p.n_elems = n_elems;
      const auto sol = micro_solve(A, p);
      for (const auto& lvl : sol.levels) {
        for (double m : lvl) EXPECT_GE(m, -1e-12);
        EXPECT_GE(lvl.front(), lvl.back());
        EXPECT_LE(flux_integral(lvl), 0.0);
      }
    }
  }
}

TEST(Micro, LinearInSource) {
  const MicroParams p;
  const auto a = micro_solve(0.7, p);
  const auto b = micro_solve(1.4, p);
  for (std::size_t l = 0; l < a.levels.size(); ++l) {
    for (std::size_t i = 0; i < a.levels[l].size(); ++i) {
      EXPECT_NEAR(b.levels[l][i], 2 * a.levels[l][i], 1e-12 * std::abs(b.levels[l][i]) + 1e-300);
    }
  }
}

TEST(Micro, FastRedistribution) {
  const auto sol = micro_solve(1.0, MicroParams{});
  const auto& last = sol.levels.back();
  const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
  const double mean = sol.mass(sol.levels.size() - 1);
  EXPECT_LT(*hi - *lo, 0.25 * mean);
}

TEST(Micro, FluxIdentity) {
  const auto sol = micro_solve(1.0, MicroParams{});
  for (const auto& lvl : sol.levels) {
    const double closed = 0.5 * (lvl.back() * lvl.back() - lvl.front() * lvl.front());
    EXPECT_NEAR(flux_integral(lvl), closed, 1e-12);
    EXPECT_NEAR(flux_integral(lvl), naive_flux(lvl), 1e-12);
  }
  EXPECT_EQ(flux_integral(std::vector<double>(9, 0.4)), 0.0);
}

TEST(Micro, VelocityExamples) {
  const MicroParams p;
  MicroSolution uniform;
  uniform.n_elems = 4;
  uniform.dtau = 0.01;
  uniform.levels.assign(11, std::vector<double>(5, 0.3));
  EXPECT_EQ(velocity_magnitude(uniform, 5000.0, p), 0.0);

  // m = z at every level: flux integral 1/2, time mean 1/2.
  MicroSolution ramp;
  ramp.n_elems = 4;
  ramp.dtau = 0.1;
  ramp.levels.assign(2, {0.0, 0.25, 0.5, 0.75, 1.0});
  EXPECT_NEAR(velocity_magnitude(ramp, 5000.0, p), 5000.0 * 0.5 * 0.1 / (0.1 * 0.01), 1e-6);
  EXPECT_NEAR(velocity_magnitude(ramp, 5000.0, p), 2.5e5, 1e-6);

  const auto sol = micro_solve(1.0, p);
  EXPECT_LT(velocity_magnitude(sol, 5000.0, p), 0.0);
}

TEST(Source, Examples) {
  const GridMesh mesh = GridMesh::build(Vec2(0, 0), Vec2(8, 8), 6);
  const double h = mesh.h();
  const auto disc = classify_cells(init_levelset(mesh, Vec2(4, 4), 1.5));
  const ActiveSet active = make_active_set(disc);
  EXPECT_NEAR(compute_source(NodalScalarField(mesh, 1.0), disc, active, Vec2(4.05, 3.9), 2 * h),
              1.0, 1e-12);
  EXPECT_EQ(compute_source(NodalScalarField(mesh, 0.0), disc, active, Vec2(4.05, 3.9), 2 * h),
            0.0);

  // Straight interface x = 4.03 through the ball center.
  const LevelSetField half{
      NodalScalarField::sample(mesh, [](const Vec2& x) { return 4.03 - x.x(); })};
  const auto cuts = classify_cells(half);
  const ActiveSet ha = make_active_set(cuts);
  const double A = compute_source(NodalScalarField(mesh, 1.0), cuts, ha, Vec2(4.03, 4.0), 2 * h);
  EXPECT_NEAR(A, 0.5, 0.01);
}
