#include "invasion/grid.hpp"

#include <cmath>

#include "invasion/errors.hpp"

namespace invasion {

GridMesh GridMesh::build(const Vec2& origin, const Vec2& extent, int refine_level) {
  if (!(extent.x() > 0.0) || !(extent.y() > 0.0)) {
    throw GeometryError("domain extent must be positive");
  }
  if (extent.x() != extent.y()) {
    throw GeometryError("domain must be square");
  }
  if (refine_level < 0 || refine_level > 14) {
    throw GeometryError("refine_level must lie in [0, 14]");
  }
  GridMesh m;
  m.origin_ = origin;
  m.extent_ = extent.x();
  m.level_ = refine_level;
  m.n_ = 1 << refine_level;
  m.h_ = m.extent_ / m.n_;
  return m;
}

Vec2 GridMesh::vertex(std::size_t v) const noexcept {
  const auto [i, j] = vertex_coords(v);
  return origin_ + Vec2(i * h_, j * h_);
}

Vec2 GridMesh::cell_origin(std::size_t cell) const noexcept {
  const auto [i, j] = cell_coords(cell);
  return origin_ + Vec2(i * h_, j * h_);
}

Vec2 GridMesh::cell_center(std::size_t cell) const noexcept {
  const auto [i, j] = cell_coords(cell);
  return origin_ + Vec2((i + 0.5) * h_, (j + 0.5) * h_);
}

std::array<std::size_t, 4> GridMesh::cell_vertices(std::size_t cell) const noexcept {
  const auto [i, j] = cell_coords(cell);
  return {vertex_index(i, j), vertex_index(i + 1, j), vertex_index(i + 1, j + 1),
          vertex_index(i, j + 1)};
}

bool GridMesh::contains(const Vec2& x) const noexcept {
  const Vec2 d = x - origin_;
  return d.x() >= 0.0 && d.y() >= 0.0 && d.x() <= extent_ && d.y() <= extent_;
}

std::size_t GridMesh::locate_cell(const Vec2& x) const {
  if (!contains(x)) {
    throw OutOfDomainError("point (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                           ") lies outside the computational domain");
  }
  const Vec2 d = (x - origin_) / h_;
  const int i = std::min(static_cast<int>(std::floor(d.x())), n_ - 1);
  const int j = std::min(static_cast<int>(std::floor(d.y())), n_ - 1);
  return cell_index(i, j);
}

double GridMesh::shape_regularity() noexcept { return std::sqrt(2.0); }

namespace q1 {

std::array<double, 4> values(const Vec2& xi) noexcept {
  const double s = xi.x();
  const double t = xi.y();
  return {(1.0 - s) * (1.0 - t), s * (1.0 - t), s * t, (1.0 - s) * t};
}

std::array<Vec2, 4> gradients(const Vec2& xi) noexcept {
  const double s = xi.x();
  const double t = xi.y();
  return {Vec2(-(1.0 - t), -(1.0 - s)), Vec2(1.0 - t, -s), Vec2(t, s), Vec2(-t, 1.0 - s)};
}

}  // namespace q1

NodalScalarField::NodalScalarField(const GridMesh& mesh, double fill)
    : mesh_(mesh), values_(mesh.num_vertices(), fill) {}

NodalScalarField::NodalScalarField(const GridMesh& mesh, std::vector<double> values)
    : mesh_(mesh), values_(std::move(values)) {
  if (values_.size() != mesh_.num_vertices()) {
    throw GeometryError("nodal field size does not match the vertex count");
  }
}

NodalScalarField NodalScalarField::sample(const GridMesh& mesh,
                                          const std::function<double(const Vec2&)>& f) {
  std::vector<double> vals(mesh.num_vertices());
  for (std::size_t v = 0; v < vals.size(); ++v) vals[v] = f(mesh.vertex(v));
  return NodalScalarField(mesh, std::move(vals));
}

std::array<double, 4> NodalScalarField::corner_values(std::size_t cell) const noexcept {
  const auto vs = mesh_.cell_vertices(cell);
  return {values_[vs[0]], values_[vs[1]], values_[vs[2]], values_[vs[3]]};
}

double NodalScalarField::eval(const Vec2& x) const {
  return eval_in_cell(mesh_.locate_cell(x), x);
}

double NodalScalarField::eval_in_cell(std::size_t cell, const Vec2& x) const noexcept {
  const auto n = q1::values(mesh_.to_reference(cell, x));
  const auto u = corner_values(cell);
  return n[0] * u[0] + n[1] * u[1] + n[2] * u[2] + n[3] * u[3];
}

Vec2 NodalScalarField::gradient_in_cell(std::size_t cell, const Vec2& x) const noexcept {
  const auto g = q1::gradients(mesh_.to_reference(cell, x));
  const auto u = corner_values(cell);
  Vec2 r = Vec2::Zero();
  for (int a = 0; a < 4; ++a) r += u[a] * g[a];
  return r / mesh_.h();
}

}  // namespace invasion
