#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace invasion {

using Vec2 = Eigen::Vector2d;

/// Uniform square grid over the square Y = origin + [0, extent]^2.
///
/// Vertices and cells are numbered row-major from the origin: the x index runs
/// fastest. Cell corners are listed counter-clockwise starting at the lower-left
/// vertex, i.e. reference points (0,0), (1,0), (1,1), (0,1).
class GridMesh {
 public:
  /// Mesh of 2^refine_level cells per axis. Throws GeometryError for a
  /// non-square or empty extent and for negative refinement levels.
  static GridMesh build(const Vec2& origin, const Vec2& extent, int refine_level);

  const Vec2& origin() const noexcept { return origin_; }
  double extent() const noexcept { return extent_; }
  int cells_per_axis() const noexcept { return n_; }
  int vertices_per_axis() const noexcept { return n_ + 1; }
  double h() const noexcept { return h_; }
  int refine_level() const noexcept { return level_; }

  std::size_t num_cells() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  std::size_t num_vertices() const noexcept {
    return static_cast<std::size_t>(n_ + 1) * (n_ + 1);
  }

  std::size_t cell_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * n_ + i;
  }
  std::size_t vertex_index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * (n_ + 1) + i;
  }
  std::array<int, 2> cell_coords(std::size_t cell) const noexcept {
    return {static_cast<int>(cell % n_), static_cast<int>(cell / n_)};
  }
  std::array<int, 2> vertex_coords(std::size_t vertex) const noexcept {
    return {static_cast<int>(vertex % (n_ + 1)), static_cast<int>(vertex / (n_ + 1))};
  }

  Vec2 vertex(std::size_t v) const noexcept;
  Vec2 cell_origin(std::size_t cell) const noexcept;
  Vec2 cell_center(std::size_t cell) const noexcept;
  std::array<std::size_t, 4> cell_vertices(std::size_t cell) const noexcept;

  bool contains(const Vec2& x) const noexcept;

  /// Cell containing x: floor(x/h) per axis, clamped to the last cell on the
  /// upper boundary. Throws OutOfDomainError outside the closed square.
  std::size_t locate_cell(const Vec2& x) const;

  /// Reference coordinates of x relative to `cell` (not restricted to [0,1]^2).
  Vec2 to_reference(std::size_t cell, const Vec2& x) const noexcept {
    return (x - cell_origin(cell)) / h_;
  }
  Vec2 from_reference(std::size_t cell, const Vec2& xi) const noexcept {
    return cell_origin(cell) + h_ * xi;
  }

  /// h_K / rho_K for a square cell.
  static double shape_regularity() noexcept;

  friend bool operator==(const GridMesh& a, const GridMesh& b) noexcept {
    return a.origin_ == b.origin_ && a.extent_ == b.extent_ && a.n_ == b.n_;
  }

 private:
  Vec2 origin_{0.0, 0.0};
  double extent_ = 1.0;
  int n_ = 1;
  int level_ = 0;
  double h_ = 1.0;
};

namespace q1 {
/// Bilinear basis values at a reference point, in corner order.
std::array<double, 4> values(const Vec2& xi) noexcept;
/// Reference-coordinate gradients of the bilinear basis.
std::array<Vec2, 4> gradients(const Vec2& xi) noexcept;
}  // namespace q1

/// One Q1 value per mesh vertex.
class NodalScalarField {
 public:
  NodalScalarField() = default;
  explicit NodalScalarField(const GridMesh& mesh, double fill = 0.0);
  NodalScalarField(const GridMesh& mesh, std::vector<double> values);

  static NodalScalarField sample(const GridMesh& mesh,
                                 const std::function<double(const Vec2&)>& f);

  const GridMesh& mesh() const noexcept { return mesh_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t v) const noexcept { return values_[v]; }
  double& operator[](std::size_t v) noexcept { return values_[v]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::array<double, 4> corner_values(std::size_t cell) const noexcept;

  /// Bilinear interpolant at x. Throws OutOfDomainError outside Y.
  double eval(const Vec2& x) const;
  /// Cell polynomial evaluated at x, which may lie outside the cell (extrapolation).
  double eval_in_cell(std::size_t cell, const Vec2& x) const noexcept;
  /// Physical gradient of the cell polynomial at x.
  Vec2 gradient_in_cell(std::size_t cell, const Vec2& x) const noexcept;

 private:
  GridMesh mesh_;
  std::vector<double> values_;
};

inline double eval_field(const NodalScalarField& field, const Vec2& x) { return field.eval(x); }

}  // namespace invasion
