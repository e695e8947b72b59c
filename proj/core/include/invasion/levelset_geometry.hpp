#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "invasion/grid.hpp"
#include "invasion/quadrature.hpp"

namespace invasion {

/// Level-set function of the tumour region: positive inside, negative outside.
struct LevelSetField {
  NodalScalarField phi;
  const GridMesh& mesh() const noexcept { return phi.mesh(); }
};

/// phi0(x) = R - |x - center|. The disc must lie strictly inside Y.
LevelSetField init_levelset(const GridMesh& mesh, const Vec2& center, double R);

enum class CellTag { Inside, Outside, Cut };

/// Piece of the linearized zero level inside one cell.
struct Segment {
  Vec2 a;
  Vec2 b;
  /// Unit vector orthogonal to the segment, pointing toward decreasing phi.
  Vec2 normal;
  Vec2 midpoint() const { return 0.5 * (a + b); }
  double length() const { return (b - a).norm(); }
};

struct CellCut {
  CellTag tag = CellTag::Outside;
  /// Inside area over cell area; 1 for Inside, 0 for Outside.
  double theta = 0.0;
  /// Set for saddle (checkerboard) sign patterns; those carry two segments.
  bool ambiguous = false;
  std::vector<Segment> segments;
  /// Convex pieces of the inside region; one piece except for split saddles.
  std::vector<Polygon> inside;
};

/// Cuts an axis-aligned square by the linear-per-edge zero level of the four
/// corner values. Corners are counter-clockwise from the lower-left one and
/// values must be nonzero (see `snap_corner`). Each edge is interpolated from its
/// lower-coordinate end, so neighbouring squares built from the same vertex
/// coordinates produce bit-identical intersection points.
CellCut cut_square(const std::array<Vec2, 4>& corners, const std::array<double, 4>& values);

/// Moves corner values with |value| < 1e-12 h to +1e-12 h (interior side).
double snap_corner(double value, double h) noexcept;

class CutClassification {
 public:
  CutClassification() = default;
  CutClassification(const GridMesh& mesh, std::vector<CellCut> cells)
      : mesh_(mesh), cells_(std::move(cells)) {}

  const GridMesh& mesh() const noexcept { return mesh_; }
  const CellCut& cell(std::size_t c) const { return cells_[c]; }
  std::size_t size() const noexcept { return cells_.size(); }
  const std::vector<CellCut>& cells() const noexcept { return cells_; }

  std::size_t num_cut() const noexcept;
  std::size_t num_ambiguous() const noexcept;
  /// Sum of theta h^2 over all cells.
  double area() const noexcept;
  /// All segments in cell order, i.e. the polyline of the linearized interface.
  std::vector<Segment> segments() const;

 private:
  GridMesh mesh_;
  std::vector<CellCut> cells_;
};

CutClassification classify_cells(const LevelSetField& levelset);

/// Writes "x0 y0 x1 y1 nx ny" per segment with 17 significant digits.
void write_polyline(std::ostream& os, const std::vector<Segment>& segments);

/// One convex piece of the polygonal ball, tagged with its macro cell.
struct BallPiece {
  std::size_t cell;
  Polygon poly;
};

/// Pieces of the polygonal approximation of B(x, R_m): each macro cell touched
/// by the ball is subdivided into s x s sub-squares (s chosen so that the
/// sub-spacing is at most R_m / 4), and each sub-square is cut by the
/// linearized zero level of psi(xi) = R_m - |xi - x|. Throws GeometryError
/// when the ball leaves Y or R_m <= 0.
std::vector<BallPiece> ball_pieces(const GridMesh& mesh, const Vec2& x, double R_m);

QuadratureSet ball_quadrature(const GridMesh& mesh, const Vec2& x, double R_m);

}  // namespace invasion
