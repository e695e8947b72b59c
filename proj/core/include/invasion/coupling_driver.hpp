#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invasion/errors.hpp"
#include "invasion/grid.hpp"
#include "invasion/interface_velocity.hpp"
#include "invasion/levelset_geometry.hpp"
#include "invasion/levelset_transport.hpp"
#include "invasion/macro_dynamics.hpp"
#include "invasion/micro_dynamics.hpp"

namespace invasion {

struct SimConfig {
  // Model parameters.
  double T = 10.0;
  double R = 1.5;
  double eps = 0.01;
  double D1 = 0.0043;
  double eta = 0.06;
  double mu1_star = 0.25;
  double mu2 = 0.15;
  double alpha = 1.5;
  double D2 = 0.001;
  // Numerical setting.
  double dT = 0.1;
  double k = 0.1;
  int refine_level = 9;
  double delta = 0.5;
  double rho = 0.1;
  double c_vel = 5000.0;
  Mu1Mode mu1_mode = Mu1Mode::Constant;
  /// Radius of the source ball; unset means two cell widths.
  std::optional<double> R_m;
  int n_micro_steps = 10;
  int n_micro_elems = 64;
  double domain_min = 0.0;
  double domain_max = 8.0;
  int snapshot_every = 1;
  std::string out_dir = "out";

  MacroParams macro() const;
  MicroParams micro() const;
  TransportParams transport() const;
  GridMesh mesh() const;
  Vec2 center() const;
  double ball_radius() const;
  /// Macro implicit-Euler steps per splitting step (dT / k).
  int macro_substeps() const;
  /// Splitting steps to reach T.
  int num_steps() const;

  bool operator==(const SimConfig&) const = default;
};

struct ConfigIssue {
  /// Config key the problem is attributed to.
  std::string key;
  std::string message;
};

/// First violated invariant, if any.
std::optional<ConfigIssue> find_config_issue(const SimConfig& config);
/// Throws ConfigError (without a line number) on a violated invariant.
void validate(const SimConfig& config);

struct Diagnostics {
  double t = 0.0;
  double area = 0.0;
  double cancer_mass = 0.0;
  double ecm_mass = 0.0;
  /// ECM integrated over the tumour region only; not part of the CSV row.
  double ecm_mass_inside = 0.0;
  double max_speed = 0.0;
  int newton_iters = 0;
  std::size_t cut_cells = 0;
  std::size_t suppressed_cells = 0;
};

/// Scalars of one state; integrals over the tumour use cut-cell quadrature.
Diagnostics diagnostics_row(const MacroState& state, const CutClassification& cuts,
                            const std::vector<InterfaceSample>& samples, int newton_iters = 0);

/// Integral of a nodal field over the active inside region.
double integrate_inside(const NodalScalarField& f, const CutClassification& cuts,
                        const ActiveSet& active);
/// Integral of a nodal field over all of Y (exact for Q1).
double integrate_domain(const NodalScalarField& f);

enum class Phase { Macro, Sources, Micro, Velocity, Extension, Transport, Domain };

const char* phase_name(Phase p) noexcept;

/// A module error raised inside a splitting step, tagged with where it happened.
class StepError : public Error {
 public:
  StepError(int step, Phase phase, const std::string& what, bool degenerate)
      : Error("step " + std::to_string(step) + " phase " + phase_name(phase) + ": " + what),
        step_(step),
        phase_(phase),
        degenerate_(degenerate) {}
  int step() const noexcept { return step_; }
  Phase phase() const noexcept { return phase_; }
  /// The tumour region degenerated, as opposed to a solver failure.
  bool degenerate() const noexcept { return degenerate_; }

 private:
  int step_;
  Phase phase_;
  bool degenerate_;
};

/// State at the end of a splitting step; enough to resume the run.
struct Checkpoint {
  int step = 0;
  double t = 0.0;
  NodalScalarField c;
  NodalScalarField v;
  NodalScalarField phi;
};

/// The splitting loop. Each step runs the phases in the order
///   macro -> sources -> micro -> velocity -> extension -> transport -> domain
/// and calling a phase out of turn throws PhaseError. `step()` runs them all.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config);
  Simulation(const SimConfig& config, const Checkpoint& resume);

  void solve_macro();
  void compute_sources();
  void solve_micro();
  void compute_velocity();
  void extend_velocity();
  void transport();
  /// Classifies the moved level set and carries c, v to the new active set.
  void update_domain();

  /// One full splitting step. Errors come back as StepError.
  const Diagnostics& step();
  bool finished() const noexcept { return step_ >= num_steps_; }

  Phase next_phase() const noexcept { return next_; }
  int step_index() const noexcept { return step_; }
  int num_steps() const noexcept { return num_steps_; }
  const SimConfig& config() const noexcept { return config_; }
  const GridMesh& mesh() const noexcept { return mesh_; }
  const MacroState& state() const noexcept { return state_; }
  const LevelSetField& levelset() const noexcept { return phi_; }
  const CutClassification& cuts() const noexcept { return cuts_; }
  const std::vector<InterfaceSample>& samples() const noexcept { return samples_; }
  const std::vector<MicroSolution>& micro() const noexcept { return micro_; }
  const VelocityField& velocity() const noexcept { return velocity_; }
  /// Newton reports of the macro substeps of the current step.
  const std::vector<NewtonReport>& newton() const noexcept { return newton_; }
  const Diagnostics& diagnostics() const noexcept { return diag_; }
  Checkpoint checkpoint() const;

 private:
  void expect(Phase p) const;

  SimConfig config_;
  GridMesh mesh_;
  MacroParams macro_params_;
  MicroParams micro_params_;
  TransportParams transport_params_;
  NodalScalarField v0_;
  int num_steps_ = 0;
  int step_ = 0;
  Phase next_ = Phase::Macro;

  LevelSetField phi_;
  CutClassification cuts_;
  MacroState state_;
  std::vector<NewtonReport> newton_;
  std::vector<InterfaceSample> samples_;
  std::vector<MicroSolution> micro_;
  VelocityField velocity_;
  TransportSolver transport_;
  Diagnostics diag_;
};

struct RunSummary {
  int steps = 0;
  std::vector<Diagnostics> rows;
};

/// Called once for the initial state and after every completed step.
using StepObserver = std::function<void(const Simulation&)>;

RunSummary run(const SimConfig& config, const StepObserver& observer = {});

}  // namespace invasion
