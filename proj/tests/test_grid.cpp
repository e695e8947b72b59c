#include <gtest/gtest.h>

#include <random>

#include "invasion/errors.hpp"
#include "invasion/grid.hpp"

using namespace invasion;

namespace {
GridMesh unit_square(int level) { return GridMesh::build(Vec2(0, 0), Vec2(8, 8), level); }
}  // namespace

TEST(Grid, BuildSizes) {
  EXPECT_DOUBLE_EQ(unit_square(9).h(), 0.015625);
  const GridMesh one = unit_square(0);
  EXPECT_EQ(one.num_cells(), 1u);
  EXPECT_DOUBLE_EQ(one.h(), 8.0);
  const GridMesh m7 = unit_square(7);
  EXPECT_EQ(m7.cells_per_axis(), 128);
  EXPECT_DOUBLE_EQ(m7.h(), 0.0625);
  EXPECT_EQ(m7.vertices_per_axis(), 129);
  EXPECT_DOUBLE_EQ(GridMesh::shape_regularity(), std::sqrt(2.0));
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(GridMesh::build(Vec2(0, 0), Vec2(8, 4), 3), GeometryError);
  EXPECT_THROW(GridMesh::build(Vec2(0, 0), Vec2(0, 0), 3), GeometryError);
  EXPECT_THROW(GridMesh::build(Vec2(0, 0), Vec2(8, 8), -1), GeometryError);
}

TEST(Grid, LocateCell) {
  const GridMesh m = unit_square(9);
  EXPECT_EQ(m.locate_cell(Vec2(0, 0)), 0u);
  EXPECT_EQ(m.locate_cell(Vec2(4, 4)), m.cell_index(256, 256));
  EXPECT_EQ(m.locate_cell(Vec2(8, 8)), m.num_cells() - 1);
  EXPECT_THROW(m.locate_cell(Vec2(9, 1)), OutOfDomainError);
}

TEST(Grid, CellVerticesCounterClockwise) {
  const GridMesh m = unit_square(2);
  const std::size_t c = m.cell_index(1, 2);
  const auto v = m.cell_vertices(c);
  EXPECT_EQ(v[0], m.vertex_index(1, 2));
  EXPECT_EQ(v[1], m.vertex_index(2, 2));
  EXPECT_EQ(v[2], m.vertex_index(2, 3));
  EXPECT_EQ(v[3], m.vertex_index(1, 3));
  EXPECT_EQ(m.vertex(v[0]), m.cell_origin(c));
}

TEST(Grid, EvalExamples) {
  const GridMesh m = unit_square(3);
  const NodalScalarField one(m, 1.0);
  EXPECT_DOUBLE_EQ(one.eval(Vec2(1.234, 6.5)), 1.0);

  const GridMesh unit = GridMesh::build(Vec2(0, 0), Vec2(1, 1), 0);
  // Corner values (0,1,0,1) counter-clockwise; vertices are stored row-major.
  const NodalScalarField f(unit, std::vector<double>{0, 1, 1, 0});
  EXPECT_EQ(f.corner_values(0), (std::array<double, 4>{0, 1, 0, 1}));
  EXPECT_DOUBLE_EQ(f.eval(Vec2(0.5, 0.5)), 0.5);
  EXPECT_THROW(f.eval(Vec2(1.5, 0.5)), OutOfDomainError);
}

TEST(Grid, BilinearReproducesLinear) {
  const GridMesh m = unit_square(5);
  const auto f = NodalScalarField::sample(m, [](const Vec2& x) { return 0.3 * x.x() - 1.7 * x.y() + 2.0; });
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x(u(rng), u(rng));
    EXPECT_NEAR(eval_field(f, x), 0.3 * x.x() - 1.7 * x.y() + 2.0, 1e-12);
  }
}

TEST(Grid, PartitionOfUnity) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto N = q1::values(Vec2(u(rng), u(rng)));
    EXPECT_NEAR(N[0] + N[1] + N[2] + N[3], 1.0, 1e-14);
    const auto G = q1::gradients(Vec2(u(rng), u(rng)));
    EXPECT_NEAR((G[0] + G[1] + G[2] + G[3]).norm(), 0.0, 1e-14);
  }
}

TEST(Grid, GradientInCell) {
  const GridMesh m = unit_square(4);
  const auto f = NodalScalarField::sample(m, [](const Vec2& x) { return 2.0 * x.x() + 3.0 * x.y(); });
  const std::size_t c = m.locate_cell(Vec2(3.3, 1.1));
  const Vec2 g = f.gradient_in_cell(c, Vec2(3.3, 1.1));
  EXPECT_NEAR(g.x(), 2.0, 1e-12);
  EXPECT_NEAR(g.y(), 3.0, 1e-12);
  // Extrapolation keeps the cell polynomial.
  EXPECT_NEAR(f.eval_in_cell(c, Vec2(5.0, 5.0)), 25.0, 1e-12);
}
