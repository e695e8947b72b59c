#include "invasion/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "invasion/errors.hpp"

namespace invasion {

namespace {

constexpr int kCutRuleOrder = 4;
constexpr double kDegenerateArea = 1e-14;

double cross(const Vec2& a, const Vec2& b) noexcept { return a.x() * b.y() - a.y() * b.x(); }

GaussRule1D compute_gauss_legendre(int n) {
  // Newton on P_n from the Chebyshev guesses, then map [-1,1] -> [0,1].
  GaussRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

double polygon_area(const Polygon& poly) noexcept {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& poly) noexcept {
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  return a != 0.0 ? Vec2(c / (3.0 * a)) : Vec2(Vec2::Zero());
}

Polygon clip_halfplane(const Polygon& poly, const Vec2& point, const Vec2& normal) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double dp = normal.dot(p - point);
    const double dq = normal.dot(q - point);
    if (dp <= 0.0) out.push_back(p);
    if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
      const double t = dp / (dp - dq);
      out.push_back(p + t * (q - p));
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  const std::size_t n = clip.size();
  for (std::size_t i = 0; i < n && !out.empty(); ++i) {
    const Vec2& a = clip[i];
    const Vec2& b = clip[(i + 1) % n];
    const Vec2 edge = b - a;
    // Outward normal of a counter-clockwise edge.
    const Vec2 normal(edge.y(), -edge.x());
    out = clip_halfplane(out, a, normal);
  }
  return out;
}

const GaussRule1D& gauss_legendre_01(int n) {
  if (n < 1 || n > 32) throw Error("Gauss-Legendre order out of range");
  static std::map<int, GaussRule1D> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureSet cell_quadrature(const Vec2& lower_left, double h, int n) {
  const auto& g = gauss_legendre_01(n);
  QuadratureSet q;
  q.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      q.push_back({lower_left + h * Vec2(g.nodes[i], g.nodes[j]), h * h * g.weights[i] * g.weights[j]});
    }
  }
  return q;
}

void append_triangle_quadrature(QuadratureSet& out, const Vec2& a, const Vec2& b, const Vec2& c,
                                int order) {
  const double twice_area = std::abs(cross(b - a, c - a));
  if (twice_area == 0.0) return;
  const auto& g = gauss_legendre_01(order);
  // x(u, s) = a + u (b - a) + u s (c - b), dx = twice_area * u du ds.
  for (int i = 0; i < order; ++i) {
    const double u = g.nodes[i];
    for (int j = 0; j < order; ++j) {
      const double s = g.nodes[j];
      out.push_back({a + u * (b - a) + u * s * (c - b), twice_area * u * g.weights[i] * g.weights[j]});
    }
  }
}

QuadratureSet cut_quadrature(double h, const Polygon& inside) {
  QuadratureSet q;
  if (inside.size() < 3) return q;
  if (std::abs(polygon_area(inside)) < kDegenerateArea * h * h) return q;
  q.reserve((inside.size() - 2) * kCutRuleOrder * kCutRuleOrder);
  for (std::size_t i = 1; i + 1 < inside.size(); ++i) {
    append_triangle_quadrature(q, inside[0], inside[i], inside[i + 1], kCutRuleOrder);
  }
  return q;
}

QuadratureSet double_cut_quadrature(double h, const Polygon& cut_old, const Polygon& cut_new) {
  return cut_quadrature(h, clip_convex(cut_old, cut_new));
}

double total_weight(const QuadratureSet& q) noexcept {
  double s = 0.0;
  for (const auto& p : q) s += p.w;
  return s;
}

}  // namespace invasion
