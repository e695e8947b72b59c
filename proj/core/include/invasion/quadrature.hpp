#pragma once

#include <vector>

#include "invasion/grid.hpp"

namespace invasion {

/// Counter-clockwise vertex list. Cut regions produced by the library are convex.
using Polygon = std::vector<Vec2>;

struct QuadPoint {
  Vec2 x;
  double w;
};

/// Points and positive weights in physical coordinates (weights carry area units).
using QuadratureSet = std::vector<QuadPoint>;

double polygon_area(const Polygon& poly) noexcept;
Vec2 polygon_centroid(const Polygon& poly) noexcept;

/// Part of `poly` with normal.(x - point) <= 0.
Polygon clip_halfplane(const Polygon& poly, const Vec2& point, const Vec2& normal);

/// Intersection of `subject` with convex counter-clockwise `clip`.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// 1D Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule1D& gauss_legendre_01(int n);

/// Tensor Gauss rule over an axis-aligned square cell; n = 3 integrates Q5 exactly.
QuadratureSet cell_quadrature(const Vec2& lower_left, double h, int n = 3);

/// Collapsed (Duffy) Gauss rule with `order`^2 points on a triangle; exact for
/// total degree 2*order - 2.
void append_triangle_quadrature(QuadratureSet& out, const Vec2& a, const Vec2& b, const Vec2& c,
                                int order);

/// Quadrature over a convex polygon lying in a cell of size h. Fan-triangulated,
/// exact for polynomials of total degree 6. Polygons with area below 1e-14 h^2
/// give an empty set.
QuadratureSet cut_quadrature(double h, const Polygon& inside);

/// Region inside both cuts of the same cell (the first polygon clipped by the second).
QuadratureSet double_cut_quadrature(double h, const Polygon& cut_old, const Polygon& cut_new);

double total_weight(const QuadratureSet& q) noexcept;

}  // namespace invasion
