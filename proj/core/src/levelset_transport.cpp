#include "invasion/levelset_transport.hpp"

#include <array>

#include "invasion/errors.hpp"
#include "invasion/quadrature.hpp"

namespace invasion {

namespace {

using Local = std::array<std::array<double, 4>, 4>;

// Reference-cell integrals on a cell of size h; [a][b] = test a, trial b.
struct ReferenceMatrices {
  Local mass{};
  std::array<Local, 2> conv{};                 // (d_p N_b, N_a)
  std::array<std::array<Local, 2>, 2> sd{};    // (d_p N_b, d_q N_a)
};

ReferenceMatrices reference_matrices(double h) {
  ReferenceMatrices r;
  for (const auto& q : cell_quadrature(Vec2::Zero(), 1.0, 3)) {
    const auto N = q1::values(q.x);
    const auto G = q1::gradients(q.x);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        r.mass[a][b] += q.w * h * h * N[a] * N[b];
        for (int p = 0; p < 2; ++p) {
          r.conv[p][a][b] += q.w * h * G[b][p] * N[a];
          for (int s = 0; s < 2; ++s) r.sd[p][s][a][b] += q.w * G[b][p] * G[a][s];
        }
      }
    }
  }
  return r;
}

}  // namespace

struct TransportSolver::Impl {
  GridMesh mesh;
  ReferenceMatrices ref;
  SparseMatrix mass;
  SparseDirectSolver solver;

  explicit Impl(const GridMesh& m) : mesh(m), ref(reference_matrices(m.h())) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.num_cells() * 16);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const auto vs = mesh.cell_vertices(c);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          trip.emplace_back(static_cast<int>(vs[a]), static_cast<int>(vs[b]), ref.mass[a][b]);
        }
      }
    }
    const auto n = static_cast<int>(mesh.num_vertices());
    mass.resize(n, n);
    mass.setFromTriplets(trip.begin(), trip.end());
  }

  SparseMatrix assemble(const VelocityField& V, const TransportParams& p) const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.num_cells() * 16);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const auto vs = mesh.cell_vertices(c);
      const Vec2& w = V[c];
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          double val = ref.mass[a][b];
          for (int i = 0; i < 2; ++i) {
            val += p.k * w[i] * ref.conv[i][a][b];
            for (int j = 0; j < 2; ++j) val += p.k * p.delta * w[i] * w[j] * ref.sd[i][j][a][b];
          }
          trip.emplace_back(static_cast<int>(vs[a]), static_cast<int>(vs[b]), val);
        }
      }
    }
    const auto n = static_cast<int>(mesh.num_vertices());
    SparseMatrix A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
  }
};

TransportSolver::TransportSolver(const GridMesh& mesh) : impl_(std::make_unique<Impl>(mesh)) {}
TransportSolver::~TransportSolver() = default;
TransportSolver::TransportSolver(TransportSolver&&) noexcept = default;
TransportSolver& TransportSolver::operator=(TransportSolver&&) noexcept = default;

SparseMatrix TransportSolver::system_matrix(const VelocityField& V,
                                            const TransportParams& params) const {
  return impl_->assemble(V, params);
}

LevelSetField TransportSolver::step(const LevelSetField& phi, const VelocityField& V,
                                    const TransportParams& params) {
  if (!(phi.mesh() == impl_->mesh) || !(V.mesh() == impl_->mesh)) {
    throw GeometryError("transport inputs live on a different mesh");
  }
  if (!(params.k > 0.0) || !(params.delta >= 0.0)) {
    throw Error("transport needs k > 0 and delta >= 0");
  }
  if (V.is_zero()) return phi;

  const SparseMatrix A = impl_->assemble(V, params);
  const Eigen::Map<const Vector> old(phi.phi.values().data(),
                                     static_cast<Eigen::Index>(phi.phi.size()));
  const Vector b = impl_->mass * old;
  impl_->solver.refactorize(A);
  const Vector x = impl_->solver.solve(b);
  return {NodalScalarField(impl_->mesh, std::vector<double>(x.data(), x.data() + x.size()))};
}

LevelSetField transport_step(const LevelSetField& phi, const VelocityField& V,
                             const TransportParams& params) {
  TransportSolver solver(phi.mesh());
  return solver.step(phi, V, params);
}

}  // namespace invasion
