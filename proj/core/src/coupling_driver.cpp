#include "invasion/coupling_driver.hpp"

#include <algorithm>
#include <cmath>

namespace invasion {

namespace {

// True when ratio = a / b is a positive integer up to rounding.
bool integer_ratio(double a, double b) {
  const double r = a / b;
  const double n = std::round(r);
  return n >= 1.0 && std::abs(r - n) <= 1e-9 * n;
}

}  // namespace

MacroParams SimConfig::macro() const {
  MacroParams p;
  p.D1 = D1;
  p.eta = eta;
  p.mu1_star = mu1_star;
  p.mu2 = mu2;
  p.alpha = alpha;
  p.mu1_mode = mu1_mode;
  return p;
}

MicroParams SimConfig::micro() const {
  MicroParams p;
  p.D2 = D2;
  p.eps = eps;
  p.dT = dT;
  p.n_steps = n_micro_steps;
  p.n_elems = n_micro_elems;
  return p;
}

TransportParams SimConfig::transport() const { return {delta, k}; }

GridMesh SimConfig::mesh() const {
  const double L = domain_max - domain_min;
  return GridMesh::build(Vec2(domain_min, domain_min), Vec2(L, L), refine_level);
}

Vec2 SimConfig::center() const {
  const double m = 0.5 * (domain_min + domain_max);
  return {m, m};
}

double SimConfig::ball_radius() const {
  if (R_m) return *R_m;
  return 2.0 * (domain_max - domain_min) / std::ldexp(1.0, refine_level);
}

int SimConfig::macro_substeps() const { return static_cast<int>(std::lround(dT / k)); }

int SimConfig::num_steps() const { return static_cast<int>(std::lround(T / dT)); }

std::optional<ConfigIssue> find_config_issue(const SimConfig& c) {
  std::optional<ConfigIssue> issue;
  auto require = [&](bool ok, const char* key, const char* what) {
    if (!ok && !issue) issue = ConfigIssue{key, what};
  };
  require(c.T > 0.0 && std::isfinite(c.T), "T", "T must be positive");
  require(c.dT > 0.0 && std::isfinite(c.dT), "dT", "dT must be positive");
  require(c.k > 0.0 && std::isfinite(c.k), "k", "k must be positive");
  require(c.k <= c.dT * (1.0 + 1e-12), "k", "k must not exceed dT");
  require(integer_ratio(c.dT, c.k), "dT", "dT must be an integer multiple of k");
  require(integer_ratio(c.T, c.dT), "T", "T must be an integer multiple of dT");
  require(c.eps > 0.0, "eps", "eps must be positive");
  require(c.D1 >= 0.0 && c.D2 >= 0.0, "D1", "diffusion coefficients must be nonnegative");
  require(c.eta >= 0.0 && c.mu1_star >= 0.0 && c.mu2 >= 0.0 && c.alpha >= 0.0, "eta",
          "reaction coefficients must be nonnegative");
  require(c.delta >= 0.0, "delta", "delta must be nonnegative");
  require(c.rho >= 0.0, "rho", "rho must be nonnegative");
  require(c.c_vel >= 0.0 && std::isfinite(c.c_vel), "c_vel", "c_vel must be nonnegative");
  require(c.refine_level >= 1 && c.refine_level <= 14, "refine_level", "refine_level must be in [1, 14]");
  require(c.n_micro_steps >= 1, "n_micro_steps", "n_micro_steps must be positive");
  require(c.n_micro_elems >= 2 && c.n_micro_elems % 2 == 0, "n_micro_elems",
          "n_micro_elems must be even and at least 2");
  require(c.snapshot_every >= 1, "snapshot_every", "snapshot_every must be positive");
  require(std::isfinite(c.domain_min) && std::isfinite(c.domain_max) &&
              c.domain_max > c.domain_min, "domain_max",
          "domain_max must exceed domain_min");
  require(c.R > 0.0 && 2.0 * c.R < c.domain_max - c.domain_min, "R",
          "the initial disc must fit strictly inside the domain");
  require(!c.R_m || *c.R_m > 0.0, "R_m", "R_m must be positive");
  require(!c.out_dir.empty(), "out_dir", "out_dir must not be empty");
  require(c.out_dir.find_first_of("#\r\n") == std::string::npos &&
              c.out_dir.find_first_not_of(" \t") == 0 &&
              c.out_dir.find_last_not_of(" \t") == c.out_dir.size() - 1,
          "out_dir", "out_dir must not contain '#', line breaks or surrounding blanks");
  return issue;
}

void validate(const SimConfig& c) {
  if (auto issue = find_config_issue(c)) throw ConfigError(issue->key + ": " + issue->message, 0);
}

double integrate_inside(const NodalScalarField& f, const CutClassification& cuts,
                        const ActiveSet& active) {
  double s = 0.0;
  for (const auto& cq : build_active_quadrature(cuts, active)) {
    for (std::size_t q = 0; q < cq.weights.size(); ++q) {
      double val = 0.0;
      for (int a = 0; a < 4; ++a) val += cq.basis[q][a] * f[cq.vertices[a]];
      s += cq.weights[q] * val;
    }
  }
  return s;
}

double integrate_domain(const NodalScalarField& f) {
  const GridMesh& mesh = f.mesh();
  const double quarter = 0.25 * mesh.h() * mesh.h();
  double s = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto v = f.corner_values(c);
    s += quarter * (v[0] + v[1] + v[2] + v[3]);
  }
  return s;
}

Diagnostics diagnostics_row(const MacroState& state, const CutClassification& cuts,
                            const std::vector<InterfaceSample>& samples, int newton_iters) {
  Diagnostics d;
  d.t = state.t;
  d.area = cuts.area();
  d.cancer_mass = integrate_inside(state.c, cuts, state.active);
  d.ecm_mass = integrate_domain(state.v);
  d.ecm_mass_inside = integrate_inside(state.v, cuts, state.active);
  for (const auto& s : samples) d.max_speed = std::max(d.max_speed, std::abs(s.speed));
  d.newton_iters = newton_iters;
  d.cut_cells = cuts.num_cut();
  d.suppressed_cells = state.active.suppressed;
  return d;
}

const char* phase_name(Phase p) noexcept {
  switch (p) {
    case Phase::Macro: return "macro";
    case Phase::Sources: return "sources";
    case Phase::Micro: return "micro";
    case Phase::Velocity: return "velocity";
    case Phase::Extension: return "extension";
    case Phase::Transport: return "transport";
    case Phase::Domain: return "domain";
  }
  return "unknown";
}

Simulation::Simulation(const SimConfig& config)
    : config_((validate(config), config)),
      mesh_(config_.mesh()),
      macro_params_(config_.macro()),
      micro_params_(config_.micro()),
      transport_params_(config_.transport()),
      v0_(initial_ecm(mesh_)),
      num_steps_(config_.num_steps()),
      phi_(init_levelset(mesh_, config_.center(), config_.R)),
      cuts_(classify_cells(phi_)),
      state_(initial_conditions(mesh_, config_.center(), config_.R)),
      velocity_(mesh_),
      transport_(mesh_) {
  diag_ = diagnostics_row(state_, cuts_, samples_);
}

Simulation::Simulation(const SimConfig& config, const Checkpoint& resume)
    : config_((validate(config), config)),
      mesh_(config_.mesh()),
      macro_params_(config_.macro()),
      micro_params_(config_.micro()),
      transport_params_(config_.transport()),
      v0_(initial_ecm(mesh_)),
      num_steps_(config_.num_steps()),
      step_(resume.step),
      velocity_(mesh_),
      transport_(mesh_) {
  if (!(resume.c.mesh() == mesh_) || !(resume.v.mesh() == mesh_) ||
      !(resume.phi.mesh() == mesh_)) {
    throw GeometryError("checkpoint mesh does not match the configuration");
  }
  if (resume.step < 0 || resume.step > num_steps_) {
    throw Error("checkpoint step outside the configured run");
  }
  phi_ = LevelSetField{resume.phi};
  cuts_ = classify_cells(phi_);
  state_.c = resume.c;
  state_.v = resume.v;
  state_.t = resume.t;
  state_.active = make_active_set(cuts_);
  diag_ = diagnostics_row(state_, cuts_, samples_);
}

void Simulation::expect(Phase p) const {
  if (finished()) throw PhaseError("the run is finished");
  if (p != next_) {
    throw PhaseError(std::string("phase ") + phase_name(p) + " called while " +
                     phase_name(next_) + " is due");
  }
}

void Simulation::solve_macro() {
  expect(Phase::Macro);
  newton_.clear();
  const int m = config_.macro_substeps();
  for (int i = 0; i < m; ++i) newton_.push_back(macro_step(state_, cuts_, config_.k, macro_params_));
  next_ = Phase::Sources;
}

void Simulation::compute_sources() {
  expect(Phase::Sources);
  samples_ = sample_interface(cuts_);
  attach_sources(samples_, state_, cuts_, config_.ball_radius());
  next_ = Phase::Micro;
}

void Simulation::solve_micro() {
  expect(Phase::Micro);
  micro_.clear();
  micro_.reserve(samples_.size());
  for (const auto& s : samples_) micro_.push_back(micro_solve(std::max(0.0, s.amplitude), micro_params_));
  next_ = Phase::Velocity;
}

void Simulation::compute_velocity() {
  expect(Phase::Velocity);
  attach_velocities(samples_, micro_, config_.c_vel, micro_params_);
  next_ = Phase::Extension;
}

void Simulation::extend_velocity() {
  expect(Phase::Extension);
  velocity_ = invasion::extend_velocity(samples_, mesh_, config_.rho);
  next_ = Phase::Transport;
}

void Simulation::transport() {
  expect(Phase::Transport);
  const int m = config_.macro_substeps();
  for (int i = 0; i < m; ++i) phi_ = transport_.step(phi_, velocity_, transport_params_);
  next_ = Phase::Domain;
}

void Simulation::update_domain() {
  expect(Phase::Domain);
  CutClassification next = classify_cells(phi_);
  const int n = mesh_.cells_per_axis();
  for (int t = 0; t < n; ++t) {
    for (std::size_t c : {mesh_.cell_index(t, 0), mesh_.cell_index(t, n - 1),
                          mesh_.cell_index(0, t), mesh_.cell_index(n - 1, t)}) {
      if (next.cell(c).tag != CellTag::Outside) {
        throw DegenerateDomainError("the tumour reached the boundary of Y");
      }
    }
  }
  extend_state(state_, next, v0_);
  cuts_ = std::move(next);
  ++step_;
  state_.t = step_ * config_.dT;
  int iters = 0;
  for (const auto& r : newton_) iters = std::max(iters, r.iterations);
  diag_ = diagnostics_row(state_, cuts_, samples_, iters);
  next_ = Phase::Macro;
}

const Diagnostics& Simulation::step() {
  if (finished()) throw PhaseError("the run is finished");
  const int s = step_ + 1;
  try {
    solve_macro();
    compute_sources();
    solve_micro();
    compute_velocity();
    extend_velocity();
    transport();
    update_domain();
  } catch (const PhaseError&) {
    throw;
  } catch (const DegenerateDomainError& e) {
    throw StepError(s, next_, e.what(), true);
  } catch (const Error& e) {
    throw StepError(s, next_, e.what(), false);
  }
  return diag_;
}

Checkpoint Simulation::checkpoint() const {
  if (next_ != Phase::Macro) throw PhaseError("checkpoints are taken between steps");
  return {step_, state_.t, state_.c, state_.v, phi_.phi};
}

RunSummary run(const SimConfig& config, const StepObserver& observer) {
  Simulation sim(config);
  RunSummary out;
  out.rows.push_back(sim.diagnostics());
  if (observer) observer(sim);
  while (!sim.finished()) {
    out.rows.push_back(sim.step());
    ++out.steps;
    if (observer) observer(sim);
  }
  return out;
}

}  // namespace invasion
