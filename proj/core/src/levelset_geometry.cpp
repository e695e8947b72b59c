#include "invasion/levelset_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

constexpr double kSnapFactor = 1e-12;
// Ball sub-squares are at most R_m / kBallResolution wide.
constexpr double kBallResolution = 8.0;
constexpr int kMaxBallSubdivision = 256;

// Canonical edge k: endpoints ordered from the lower coordinate to the higher.
constexpr std::array<std::array<int, 2>, 4> kEdgeEnds = {{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};

Vec2 edge_point(const std::array<Vec2, 4>& p, const std::array<double, 4>& u, int edge) {
  const int a = kEdgeEnds[edge][0];
  const int b = kEdgeEnds[edge][1];
  const double t = u[a] / (u[a] - u[b]);
  return p[a] + t * (p[b] - p[a]);
}

Vec2 bilinear_gradient(const std::array<Vec2, 4>& p, const std::array<double, 4>& u,
                       const Vec2& x) {
  const double size = p[1].x() - p[0].x();
  const Vec2 xi = (x - p[0]) / size;
  const auto g = q1::gradients(xi);
  Vec2 r = Vec2::Zero();
  for (int a = 0; a < 4; ++a) r += u[a] * g[a];
  return r / size;
}

// Orients the segment so that the inside lies to its left and sets the normal
// from the phi gradient at the midpoint.
Segment make_segment(Vec2 a, Vec2 b, const std::array<Vec2, 4>& p,
                     const std::array<double, 4>& u, const Polygon& inside_piece) {
  Segment s{a, b, Vec2::Zero()};
  const Vec2 d = b - a;
  const double len = d.norm();
  const Vec2 grad = bilinear_gradient(p, u, s.midpoint());
  if (len > 0.0) {
    Vec2 n(d.y() / len, -d.x() / len);
    double orient = n.dot(grad);
    if (std::abs(orient) <= 1e-14 * grad.norm() && !inside_piece.empty()) {
      // Gradient nearly tangent: fall back to the side away from the inside region.
      orient = -n.dot(s.midpoint() - polygon_centroid(inside_piece));
    }
    if (orient > 0.0) {
      n = -n;
      std::swap(s.a, s.b);
    }
    s.normal = n;
  } else {
    const double g = grad.norm();
    s.normal = g > 0.0 ? Vec2(-grad / g) : Vec2(1.0, 0.0);
  }
  return s;
}

}  // namespace

LevelSetField init_levelset(const GridMesh& mesh, const Vec2& center, double R) {
  if (!(R > 0.0)) throw GeometryError("initial radius must be positive");
  const Vec2 lo = mesh.origin();
  const Vec2 hi = lo + Vec2(mesh.extent(), mesh.extent());
  if (center.x() - R <= lo.x() || center.y() - R <= lo.y() || center.x() + R >= hi.x() ||
      center.y() + R >= hi.y()) {
    throw GeometryError("initial disc must lie strictly inside the computational domain");
  }
  return {NodalScalarField::sample(mesh, [&](const Vec2& x) { return R - (x - center).norm(); })};
}

double snap_corner(double value, double h) noexcept {
  const double tol = kSnapFactor * h;
  return std::abs(value) < tol ? tol : value;
}

CellCut cut_square(const std::array<Vec2, 4>& p, const std::array<double, 4>& u) {
  CellCut cut;
  int positive = 0;
  for (double v : u) positive += v > 0.0 ? 1 : 0;
  const double size = p[1].x() - p[0].x();
  const double cell_area = size * size;

  if (positive == 4) {
    cut.tag = CellTag::Inside;
    cut.theta = 1.0;
    cut.inside.push_back(Polygon(p.begin(), p.end()));
    return cut;
  }
  if (positive == 0) {
    cut.tag = CellTag::Outside;
    cut.theta = 0.0;
    return cut;
  }

  cut.tag = CellTag::Cut;
  // Intersection on each counter-clockwise edge k -> k+1, if any.
  std::array<bool, 4> crossed{};
  std::array<Vec2, 4> cross_pt;
  // ccw edge k joins corners k and k+1; canonical edges 0..3 match by index.
  for (int k = 0; k < 4; ++k) {
    const int k1 = (k + 1) % 4;
    crossed[k] = (u[k] > 0.0) != (u[k1] > 0.0);
    if (crossed[k]) cross_pt[k] = edge_point(p, u, k);
  }

  const bool saddle = positive == 2 && (u[0] > 0.0) == (u[2] > 0.0);
  if (!saddle) {
    Polygon poly;
    std::array<Vec2, 2> ends;
    int ne = 0;
    for (int k = 0; k < 4; ++k) {
      if (u[k] > 0.0) poly.push_back(p[k]);
      if (crossed[k]) {
        poly.push_back(cross_pt[k]);
        ends[ne++] = cross_pt[k];
      }
    }
    cut.theta = std::clamp(polygon_area(poly) / cell_area, 0.0, 1.0);
    cut.segments.push_back(make_segment(ends[0], ends[1], p, u, poly));
    cut.inside.push_back(std::move(poly));
    return cut;
  }

  cut.ambiguous = true;
  const double center = 0.25 * (u[0] + u[1] + u[2] + u[3]);
  // cross_pt[k] lies on the ccw edge between corners k and k+1.
  auto before = [&](int k) { return cross_pt[(k + 3) % 4]; };
  auto after = [&](int k) { return cross_pt[k]; };
  if (center >= 0.0) {
    // Connected inside: clip off each negative corner.
    Polygon poly;
    for (int k = 0; k < 4; ++k) {
      if (u[k] > 0.0) poly.push_back(p[k]);
      poly.push_back(cross_pt[k]);
    }
    for (int k = 0; k < 4; ++k) {
      if (u[k] < 0.0) cut.segments.push_back(make_segment(before(k), after(k), p, u, poly));
    }
    cut.theta = std::clamp(polygon_area(poly) / cell_area, 0.0, 1.0);
    cut.inside.push_back(std::move(poly));
  } else {
    // Two separate inside triangles around the positive corners.
    double area = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (u[k] > 0.0) {
        Polygon tri{before(k), p[k], after(k)};
        cut.segments.push_back(make_segment(before(k), after(k), p, u, tri));
        area += polygon_area(tri);
        cut.inside.push_back(std::move(tri));
      }
    }
    cut.theta = std::clamp(area / cell_area, 0.0, 1.0);
  }
  return cut;
}

std::size_t CutClassification::num_cut() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      cells_.begin(), cells_.end(), [](const CellCut& c) { return c.tag == CellTag::Cut; }));
}

std::size_t CutClassification::num_ambiguous() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const CellCut& c) { return c.ambiguous; }));
}

double CutClassification::area() const noexcept {
  double a = 0.0;
  for (const auto& c : cells_) a += c.theta;
  return a * mesh_.h() * mesh_.h();
}

std::vector<Segment> CutClassification::segments() const {
  std::vector<Segment> out;
  for (const auto& c : cells_) out.insert(out.end(), c.segments.begin(), c.segments.end());
  return out;
}

CutClassification classify_cells(const LevelSetField& levelset) {
  const GridMesh& mesh = levelset.mesh();
  const double h = mesh.h();
  std::vector<double> snapped(levelset.phi.values().begin(), levelset.phi.values().end());
  for (double& v : snapped) v = snap_corner(v, h);

  std::vector<CellCut> cells(mesh.num_cells());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto vs = mesh.cell_vertices(c);
    const std::array<double, 4> u{snapped[vs[0]], snapped[vs[1]], snapped[vs[2]], snapped[vs[3]]};
    const std::array<Vec2, 4> p{mesh.vertex(vs[0]), mesh.vertex(vs[1]), mesh.vertex(vs[2]),
                                mesh.vertex(vs[3])};
    cells[c] = cut_square(p, u);
  }
  return CutClassification(mesh, std::move(cells));
}

void write_polyline(std::ostream& os, const std::vector<Segment>& segments) {
  char buf[256];
  for (const auto& s : segments) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", s.a.x(), s.a.y(),
                  s.b.x(), s.b.y(), s.normal.x(), s.normal.y());
    os << buf;
  }
}

std::vector<BallPiece> ball_pieces(const GridMesh& mesh, const Vec2& x, double R_m) {
  if (!(R_m > 0.0)) throw GeometryError("ball radius must be positive");
  const Vec2 lo = mesh.origin();
  const double ext = mesh.extent();
  if (x.x() - R_m < lo.x() || x.y() - R_m < lo.y() || x.x() + R_m > lo.x() + ext ||
      x.y() + R_m > lo.y() + ext) {
    throw GeometryError("source ball leaves the computational domain");
  }
  const double h = mesh.h();
  const int n = mesh.cells_per_axis();
  const int sub = std::clamp(static_cast<int>(std::ceil(kBallResolution * h / R_m)), 1,
                             kMaxBallSubdivision);
  const double hs = h / sub;

  auto cell_range = [&](double a, double b) {
    const int i0 = std::clamp(static_cast<int>(std::floor(a / h)), 0, n - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor(b / h)), 0, n - 1);
    return std::array<int, 2>{i0, i1};
  };
  const auto [ci0, ci1] = cell_range(x.x() - R_m - lo.x(), x.x() + R_m - lo.x());
  const auto [cj0, cj1] = cell_range(x.y() - R_m - lo.y(), x.y() + R_m - lo.y());

  std::vector<BallPiece> pieces;
  for (int cj = cj0; cj <= cj1; ++cj) {
    for (int ci = ci0; ci <= ci1; ++ci) {
      const std::size_t cell = mesh.cell_index(ci, cj);
      const Vec2 corner = mesh.vertex(mesh.vertex_index(ci, cj));
      // Sub-squares of this cell that overlap the ball's bounding box.
      auto sub_range = [&](double a, double b) {
        const int s0 = std::clamp(static_cast<int>(std::floor(a / hs)), 0, sub - 1);
        const int s1 = std::clamp(static_cast<int>(std::floor(b / hs)), 0, sub - 1);
        return std::array<int, 2>{s0, s1};
      };
      const auto [si0, si1] = sub_range(x.x() - R_m - corner.x(), x.x() + R_m - corner.x());
      const auto [sj0, sj1] = sub_range(x.y() - R_m - corner.y(), x.y() + R_m - corner.y());
      auto sub_vertex = [&](int a, int b) {
        return Vec2(a == sub ? corner.x() + h : corner.x() + a * hs,
                    b == sub ? corner.y() + h : corner.y() + b * hs);
      };
      for (int sj = sj0; sj <= sj1; ++sj) {
        for (int si = si0; si <= si1; ++si) {
          const std::array<Vec2, 4> p{sub_vertex(si, sj), sub_vertex(si + 1, sj),
                                      sub_vertex(si + 1, sj + 1), sub_vertex(si, sj + 1)};
          std::array<double, 4> u;
          for (int a = 0; a < 4; ++a) u[a] = snap_corner(R_m - (p[a] - x).norm(), hs);
          CellCut cut = cut_square(p, u);
          for (auto& poly : cut.inside) pieces.push_back({cell, std::move(poly)});
        }
      }
    }
  }
  return pieces;
}

QuadratureSet ball_quadrature(const GridMesh& mesh, const Vec2& x, double R_m) {
  QuadratureSet q;
  const double h = mesh.h();
  for (const auto& piece : ball_pieces(mesh, x, R_m)) {
    auto part = cut_quadrature(h, piece.poly);
    q.insert(q.end(), part.begin(), part.end());
  }
  return q;
}

}  // namespace invasion
