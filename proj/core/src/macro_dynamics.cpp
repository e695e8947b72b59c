#include "invasion/macro_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

// exp() of anything below this underflows to zero.
constexpr double kExpUnderflow = -700.0;
constexpr int kNearestSearchRadius = 3;

}  // namespace

double mu1(double v, const MacroParams& p) noexcept {
  if (p.mu1_mode == Mu1Mode::Constant) return p.mu1_star;
  const double vv = std::clamp(v, 0.0, 1.0);
  if (vv <= 0.0) return 0.0;
  const double g = vv * (vv - 2.0);  // (1 - v)^2 - 1
  const double expo = 1.0 + 1.0 / g;
  if (expo < kExpUnderflow) return 0.0;
  return p.mu1_star * std::exp(expo);
}

double mu1_derivative(double v, const MacroParams& p) noexcept {
  if (p.mu1_mode == Mu1Mode::Constant) return 0.0;
  if (v <= 0.0 || v > 1.0) return 0.0;
  const double m = mu1(v, p);
  if (m == 0.0) return 0.0;
  const double g = v * (v - 2.0);
  return m * 2.0 * (1.0 - v) / (g * g);
}

ActiveSet make_active_set(const CutClassification& cuts, double threshold) {
  const GridMesh& mesh = cuts.mesh();
  ActiveSet a;
  a.cell_active.assign(mesh.num_cells(), 0);
  a.dof_of_node.assign(mesh.num_vertices(), -1);
  std::vector<char> node_used(mesh.num_vertices(), 0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const CellCut& cut = cuts.cell(c);
    bool on = false;
    if (cut.tag == CellTag::Inside) {
      on = true;
    } else if (cut.tag == CellTag::Cut) {
      if (cut.theta >= threshold) {
        on = true;
      } else {
        ++a.suppressed;
      }
    }
    if (!on) continue;
    a.cell_active[c] = 1;
    a.cells.push_back(c);
    for (std::size_t v : mesh.cell_vertices(c)) node_used[v] = 1;
  }
  for (std::size_t v = 0; v < node_used.size(); ++v) {
    if (node_used[v]) {
      a.dof_of_node[v] = static_cast<int>(a.nodes.size());
      a.nodes.push_back(v);
    }
  }
  return a;
}

NodalScalarField initial_cancer(const GridMesh& mesh, const Vec2& center, double R) {
  return NodalScalarField::sample(
      mesh, [&](const Vec2& x) { return std::max(0.0, (R - (x - center).norm()) / R); });
}

NodalScalarField initial_ecm(const GridMesh& mesh) {
  return NodalScalarField::sample(mesh, [](const Vec2& x) {
    return 0.3 * std::sin(2.0 * std::numbers::pi * x.norm()) + 0.5;
  });
}

MacroState initial_conditions(const GridMesh& mesh, const Vec2& center, double R) {
  const auto cuts = classify_cells(init_levelset(mesh, center, R));
  MacroState s;
  s.c = initial_cancer(mesh, center, R);
  s.v = initial_ecm(mesh);
  s.t = 0.0;
  s.active = make_active_set(cuts);
  return s;
}

ExtensionReport extend_state(MacroState& state, const CutClassification& new_cuts,
                             const NodalScalarField& v0) {
  const GridMesh& mesh = new_cuts.mesh();
  const double h = mesh.h();
  if (new_cuts.area() < h * h) {
    throw DegenerateDomainError("tumour region fell below one cell");
  }
  ActiveSet next = make_active_set(new_cuts);
  if (next.cells.empty()) throw DegenerateDomainError("no active cells left");

  const ActiveSet& prev = state.active;
  const int n = mesh.cells_per_axis();
  ExtensionReport report;
  report.suppressed = next.suppressed;

  for (std::size_t v : next.nodes) {
    if (prev.is_active_node(v)) continue;
    ++report.new_nodes;
    const Vec2 x = mesh.vertex(v);
    const auto [vi, vj] = mesh.vertex_coords(v);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = std::max(0, vj - kNearestSearchRadius); j < std::min(n, vj + kNearestSearchRadius);
         ++j) {
      for (int i = std::max(0, vi - kNearestSearchRadius);
           i < std::min(n, vi + kNearestSearchRadius); ++i) {
        const std::size_t cell = mesh.cell_index(i, j);
        if (!prev.is_active_cell(cell)) continue;
        const double d = (mesh.cell_center(cell) - x).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = cell;
        }
      }
    }
    const double c_ext =
        best == std::numeric_limits<std::size_t>::max() ? 0.0 : state.c.eval_in_cell(best, x);
    state.c[v] = std::max(0.0, c_ext);
    state.v[v] = v0[v];
  }
  // Nodes leaving the domain return to the exterior convention.
  for (std::size_t v : prev.nodes) {
    if (!next.is_active_node(v)) {
      state.c[v] = 0.0;
      state.v[v] = v0[v];
    }
  }
  state.active = std::move(next);
  return report;
}

std::vector<CellQuadrature> build_active_quadrature(const CutClassification& cuts,
                                                    const ActiveSet& active) {
  const GridMesh& mesh = cuts.mesh();
  const double h = mesh.h();
  const auto ref = cell_quadrature(Vec2::Zero(), 1.0, 3);
  std::vector<std::array<double, 4>> ref_basis;
  std::vector<std::array<Vec2, 4>> ref_grad;
  for (const auto& q : ref) {
    ref_basis.push_back(q1::values(q.x));
    auto g = q1::gradients(q.x);
    for (auto& gi : g) gi /= h;
    ref_grad.push_back(g);
  }

  std::vector<CellQuadrature> out;
  out.reserve(active.cells.size());
  for (std::size_t c : active.cells) {
    CellQuadrature cq;
    cq.cell = c;
    cq.vertices = mesh.cell_vertices(c);
    const CellCut& cut = cuts.cell(c);
    if (cut.tag == CellTag::Inside) {
      for (const auto& q : ref) cq.weights.push_back(q.w * h * h);
      cq.basis = ref_basis;
      cq.grad = ref_grad;
    } else {
      for (const auto& poly : cut.inside) {
        for (const auto& q : cut_quadrature(h, poly)) {
          const Vec2 xi = mesh.to_reference(c, q.x);
          cq.weights.push_back(q.w);
          cq.basis.push_back(q1::values(xi));
          auto g = q1::gradients(xi);
          for (auto& gi : g) gi /= h;
          cq.grad.push_back(g);
        }
      }
    }
    out.push_back(std::move(cq));
  }
  return out;
}

MacroProblem::MacroProblem(const CutClassification& cuts, const ActiveSet& active,
                           const MacroParams& params, double k, const NodalScalarField& c_prev,
                           const NodalScalarField& v_prev)
    : active_(active),
      params_(params),
      k_(k),
      ndof_(active.num_dofs()),
      quad_(build_active_quadrature(cuts, active)) {
  const Vector U = pack(c_prev, v_prev);
  c_prev_ = U.head(ndof_);
  v_prev_ = U.tail(ndof_);
}

Vector MacroProblem::pack(const NodalScalarField& c, const NodalScalarField& v) const {
  Vector U(2 * ndof_);
  for (std::size_t d = 0; d < ndof_; ++d) {
    U[d] = c[active_.nodes[d]];
    U[ndof_ + d] = v[active_.nodes[d]];
  }
  return U;
}

void MacroProblem::unpack(const Vector& U, NodalScalarField& c, NodalScalarField& v) const {
  for (std::size_t d = 0; d < ndof_; ++d) {
    c[active_.nodes[d]] = U[d];
    v[active_.nodes[d]] = U[ndof_ + d];
  }
}

template <bool WithJacobian>
void MacroProblem::assemble(const Vector& U, Vector* R,
                            std::vector<Eigen::Triplet<double>>* J) const {
  const double k = k_;
  const MacroParams& p = params_;
  const auto N = static_cast<int>(ndof_);
  if (R) R->setZero(2 * ndof_);
  if (J) {
    J->clear();
    J->reserve(quad_.size() * 64);
  }

  for (const CellQuadrature& cq : quad_) {
    std::array<int, 4> dof;
    std::array<double, 4> cl, vl, cpl, vpl;
    for (int a = 0; a < 4; ++a) {
      dof[a] = active_.dof_of_node[cq.vertices[a]];
      cl[a] = U[dof[a]];
      vl[a] = U[N + dof[a]];
      cpl[a] = c_prev_[dof[a]];
      vpl[a] = v_prev_[dof[a]];
    }
    std::array<double, 4> rc{}, rv{};
    double jcc[4][4] = {}, jcv[4][4] = {}, jvc[4][4] = {}, jvv[4][4] = {};

    for (std::size_t q = 0; q < cq.weights.size(); ++q) {
      const double w = cq.weights[q];
      const auto& Nq = cq.basis[q];
      const auto& G = cq.grad[q];
      double c = 0.0, v = 0.0, cp = 0.0, vp = 0.0;
      Vec2 gv = Vec2::Zero(), gc = Vec2::Zero();
      for (int a = 0; a < 4; ++a) {
        c += cl[a] * Nq[a];
        v += vl[a] * Nq[a];
        cp += cpl[a] * Nq[a];
        vp += vpl[a] * Nq[a];
        gc += cl[a] * G[a];
        gv += vl[a] * G[a];
      }
      const double m = mu1(v, p);
      const double growth = 1.0 - c - v;
      for (int a = 0; a < 4; ++a) {
        const double ga_gc = G[a].dot(gc);
        const double ga_gv = G[a].dot(gv);
        rc[a] += w * ((c - cp) * Nq[a] +
                      k * (p.D1 * ga_gc - p.eta * c * ga_gv - m * c * growth * Nq[a]));
        rv[a] += w * ((v - vp) * Nq[a] + k * (p.alpha * c * v - p.mu2 * growth) * Nq[a]);
      }
      if constexpr (WithJacobian) {
        const double dm = mu1_derivative(v, p);
        for (int a = 0; a < 4; ++a) {
          const double ga_gv = G[a].dot(gv);
          for (int b = 0; b < 4; ++b) {
            const double nn = Nq[a] * Nq[b];
            const double gg = G[a].dot(G[b]);
            jcc[a][b] += w * (nn + k * (p.D1 * gg - p.eta * Nq[b] * ga_gv -
                                        m * (1.0 - 2.0 * c - v) * nn));
            jcv[a][b] += w * k * (-p.eta * c * gg - (dm * c * growth - m * c) * nn);
            jvc[a][b] += w * k * (p.alpha * v + p.mu2) * nn;
            jvv[a][b] += w * (1.0 + k * (p.alpha * c + p.mu2)) * nn;
          }
        }
      }
    }
    if (R) {
      for (int a = 0; a < 4; ++a) {
        (*R)[dof[a]] += rc[a];
        (*R)[N + dof[a]] += rv[a];
      }
    }
    if constexpr (WithJacobian) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          J->emplace_back(dof[a], dof[b], jcc[a][b]);
          J->emplace_back(dof[a], N + dof[b], jcv[a][b]);
          J->emplace_back(N + dof[a], dof[b], jvc[a][b]);
          J->emplace_back(N + dof[a], N + dof[b], jvv[a][b]);
        }
      }
    }
  }
}

Vector MacroProblem::residual(const Vector& U) const {
  Vector R;
  assemble<false>(U, &R, nullptr);
  return R;
}

SparseMatrix MacroProblem::jacobian(const Vector& U) const {
  std::vector<Eigen::Triplet<double>> trip;
  assemble<true>(U, nullptr, &trip);
  SparseMatrix J(2 * ndof_, 2 * ndof_);
  J.setFromTriplets(trip.begin(), trip.end());
  return J;
}

NewtonReport macro_step(MacroState& state, const CutClassification& cuts, double k,
                        const MacroParams& params) {
  if (state.active.cells.empty()) throw DegenerateDomainError("macro step on an empty domain");
  MacroProblem problem(cuts, state.active, params, k, state.c, state.v);
  Vector U = problem.pack(state.c, state.v);
  Vector R = problem.residual(U);
  NewtonReport rep;
  rep.history.push_back(R.norm());
  while (true) {
    if (rep.iterations >= params.max_newton_iters) {
      throw ConvergenceError("Newton did not converge in " +
                                 std::to_string(params.max_newton_iters) + " iterations",
                             rep.history.back());
    }
    const SparseMatrix J = problem.jacobian(U);
    U -= solve_sparse(J, R);
    R = problem.residual(U);
    ++rep.iterations;
    rep.history.push_back(R.norm());
    if (!std::isfinite(rep.history.back())) {
      throw ConvergenceError("Newton residual is not finite", rep.history.back());
    }
    if (rep.history.back() < params.newton_tol) break;
  }
  rep.residual = rep.history.back();
  problem.unpack(U, state.c, state.v);
  state.t += k;
  return rep;
}

}  // namespace invasion
