#include <gtest/gtest.h>

#include <cmath>

#include "invasion/coupling_driver.hpp"
#include "invasion/errors.hpp"

using namespace invasion;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.refine_level = 5;
  c.T = 0.3;
  return c;
}

}  // namespace

TEST(Config, DefaultsMatchTables) {
  const SimConfig c;
  EXPECT_EQ(c.R, 1.5);
  EXPECT_EQ(c.D1, 0.0043);
  EXPECT_EQ(c.eta, 0.06);
  EXPECT_EQ(c.c_vel, 5000.0);
  EXPECT_EQ(c.refine_level, 9);
  EXPECT_EQ(c.mesh().h(), 0.015625);
  EXPECT_EQ(c.macro_substeps(), 1);
  EXPECT_EQ(c.num_steps(), 100);
  EXPECT_EQ(c.ball_radius(), 2 * 0.015625);
  EXPECT_FALSE(find_config_issue(c));
}

TEST(Config, Invariants) {
  SimConfig c;
  c.k = 0.2;
  EXPECT_EQ(find_config_issue(c)->key, "k");
  c = SimConfig{};
  c.k = 0.03;
  EXPECT_EQ(find_config_issue(c)->key, "dT");
  c = SimConfig{};
  c.T = 0.25;
  EXPECT_EQ(find_config_issue(c)->key, "T");
  c = SimConfig{};
  c.R = 4.0;
  EXPECT_EQ(find_config_issue(c)->key, "R");
  c = SimConfig{};
  c.n_micro_elems = 7;
  EXPECT_THROW(validate(c), ConfigError);
  c = SimConfig{};
  c.k = 0.05;
  EXPECT_FALSE(find_config_issue(c));
  EXPECT_EQ(c.macro_substeps(), 2);
}

TEST(Driver, InitialDiagnostics) {
  SimConfig c = small_config();
  c.refine_level = 7;
  const Simulation sim(c);
  const auto& d = sim.diagnostics();
  EXPECT_EQ(d.t, 0.0);
  EXPECT_NEAR(d.area, M_PI * 2.25, 2 * sim.mesh().h());
  EXPECT_GT(d.cancer_mass, 0.0);
  EXPECT_EQ(d.max_speed, 0.0);
}

TEST(Driver, SingleStep) {
  SimConfig c = small_config();
  c.T = c.dT;
  const auto r = run(c);
  EXPECT_EQ(r.steps, 1);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_NEAR(r.rows[1].t, 0.1, 1e-15);
  EXPECT_GE(r.rows[1].newton_iters, 1);
  EXPECT_GT(r.rows[1].max_speed, 0.0);
}

TEST(Driver, PhaseOrderEnforced) {
  Simulation sim(small_config());
  EXPECT_THROW(sim.compute_sources(), PhaseError);
  sim.solve_macro();
  EXPECT_THROW(sim.solve_macro(), PhaseError);
  EXPECT_THROW(sim.checkpoint(), PhaseError);
  sim.compute_sources();
  EXPECT_EQ(sim.next_phase(), Phase::Micro);
  sim.solve_micro();
  EXPECT_EQ(sim.micro().size(), sim.samples().size());
  sim.compute_velocity();
  sim.extend_velocity();
  sim.transport();
  EXPECT_THROW(sim.step(), PhaseError);
  sim.update_domain();
  EXPECT_EQ(sim.step_index(), 1);
  EXPECT_EQ(sim.next_phase(), Phase::Macro);
}

TEST(Driver, FinishedRunRefusesSteps) {
  SimConfig c = small_config();
  c.T = c.dT;
  Simulation sim(c);
  sim.step();
  EXPECT_TRUE(sim.finished());
  EXPECT_THROW(sim.step(), PhaseError);
}

TEST(Driver, ZeroSpeedKeepsInterface) {
  SimConfig c = small_config();
  c.c_vel = 0.0;
  Simulation sim(c);
  const auto phi0 = sim.levelset().phi;
  const double a0 = sim.diagnostics().area;
  while (!sim.finished()) {
    sim.step();
    EXPECT_NEAR(sim.diagnostics().area, a0, 1e-12);
  }
  for (std::size_t v = 0; v < phi0.size(); ++v) EXPECT_EQ(sim.levelset().phi[v], phi0[v]);
}

TEST(Driver, Deterministic) {
  const auto a = run(small_config());
  const auto b = run(small_config());
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].area, b.rows[i].area);
    EXPECT_EQ(a.rows[i].cancer_mass, b.rows[i].cancer_mass);
    EXPECT_EQ(a.rows[i].max_speed, b.rows[i].max_speed);
  }
}

TEST(Driver, RestartFromCheckpointIsBitIdentical) {
  const SimConfig c = small_config();
  Simulation full(c);
  full.step();
  const Checkpoint cp = full.checkpoint();
  while (!full.finished()) full.step();

  Simulation resumed(c, cp);
  EXPECT_EQ(resumed.step_index(), 1);
  while (!resumed.finished()) resumed.step();
  for (std::size_t v = 0; v < full.mesh().num_vertices(); ++v) {
    EXPECT_EQ(full.state().c[v], resumed.state().c[v]);
    EXPECT_EQ(full.state().v[v], resumed.state().v[v]);
    EXPECT_EQ(full.levelset().phi[v], resumed.levelset().phi[v]);
  }
  EXPECT_EQ(full.state().t, resumed.state().t);
}

TEST(Driver, CheckpointMeshMustMatch) {
  const SimConfig c = small_config();
  Simulation sim(c);
  Checkpoint cp = sim.checkpoint();
  SimConfig other = c;
  other.refine_level = 6;
  EXPECT_THROW(Simulation(other, cp), GeometryError);
}

TEST(Driver, ReachingTheBoundaryAborts) {
  SimConfig c = small_config();
  c.R = 3.7;
  c.R_m = 0.1;
  c.c_vel = 1e6;
  c.T = 1.0;
  try {
    run(c);
    FAIL() << "expected an abort";
  } catch (const StepError& e) {
    EXPECT_TRUE(e.degenerate());
    EXPECT_EQ(e.phase(), Phase::Domain);
    EXPECT_GE(e.step(), 1);
  }
}

TEST(Driver, ObserverSeesEveryStep) {
  int calls = 0;
  const auto r = run(small_config(), [&](const Simulation&) { ++calls; });
  EXPECT_EQ(calls, r.steps + 1);
  EXPECT_EQ(r.steps, 3);
}
