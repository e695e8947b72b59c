#include "invasion/interface_velocity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "invasion/errors.hpp"

namespace invasion {

std::vector<InterfaceSample> sample_interface(const CutClassification& cuts) {
  std::vector<InterfaceSample> out;
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    for (const Segment& s : cuts.cell(c).segments) {
      InterfaceSample smp;
      smp.cell = c;
      smp.x = s.midpoint();
      smp.normal = s.normal;
      out.push_back(smp);
    }
  }
  if (out.empty()) throw DegenerateDomainError("no cut cells: the interface vanished");
  return out;
}

void attach_sources(std::vector<InterfaceSample>& samples, const MacroState& state,
                    const CutClassification& cuts, double R_m) {
  for (auto& s : samples) s.amplitude = compute_source(state.c, cuts, state.active, s.x, R_m);
}

void attach_velocities(std::vector<InterfaceSample>& samples,
                       const std::vector<MicroSolution>& micro, double c_vel,
                       const MicroParams& params) {
  if (micro.size() != samples.size()) throw Error("one micro solution per sample expected");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& s = samples[i];
    s.speed = s.amplitude > 0.0 ? velocity_magnitude(micro[i], c_vel, params) : 0.0;
    s.velocity = std::abs(s.speed) * s.normal;
  }
}

void attach_speeds(std::vector<InterfaceSample>& samples, const MacroState& state,
                   const CutClassification& cuts, const MicroParams& params, double R_m,
                   double c_vel) {
  attach_sources(samples, state, cuts, R_m);
  std::vector<MicroSolution> micro;
  micro.reserve(samples.size());
  for (const auto& s : samples) micro.push_back(micro_solve(std::max(0.0, s.amplitude), params));
  attach_velocities(samples, micro, c_vel, params);
}

double VelocityField::max_norm() const noexcept {
  double m = 0.0;
  for (const auto& w : cell_velocity_) m = std::max(m, w.norm());
  return m;
}

bool VelocityField::is_zero() const noexcept {
  return std::all_of(cell_velocity_.begin(), cell_velocity_.end(),
                     [](const Vec2& w) { return w.x() == 0.0 && w.y() == 0.0; });
}

VelocityField extend_velocity(const std::vector<InterfaceSample>& samples, const GridMesh& mesh,
                              double rho) {
  VelocityField field(mesh);
  if (samples.empty()) return field;
  const int n = mesh.cells_per_axis();
  const double h = mesh.h();
  const Vec2 o = mesh.origin();
  const double rho2 = rho * rho;
  std::vector<double> best(mesh.num_cells(), std::numeric_limits<double>::infinity());
  std::vector<int> owner(mesh.num_cells(), -1);

  // A cell with a sample within rho is reached from that sample's box, so
  // scanning each sample's box finds the exact nearest sample for every such cell.
  auto index_range = [&](double lo, double hi) {
    const double a = std::isfinite(lo) ? std::floor(lo / h - 0.5) : -1.0;
    const double b = std::isfinite(hi) ? std::ceil(hi / h - 0.5) : static_cast<double>(n);
    return std::array<int, 2>{static_cast<int>(std::clamp(a, 0.0, n - 1.0)),
                              static_cast<int>(std::clamp(b, 0.0, n - 1.0))};
  };
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec2& x = samples[s].x;
    const auto [i0, i1] = index_range(x.x() - rho - o.x(), x.x() + rho - o.x());
    const auto [j0, j1] = index_range(x.y() - rho - o.y(), x.y() + rho - o.y());
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const std::size_t c = mesh.cell_index(i, j);
        const double d2 = (mesh.cell_center(c) - x).squaredNorm();
        if (d2 <= rho2 && d2 < best[c]) {
          best[c] = d2;
          owner[c] = static_cast<int>(s);
        }
      }
    }
  }
  for (std::size_t c = 0; c < field.size(); ++c) {
    if (owner[c] >= 0) field[c] = samples[owner[c]].velocity;
  }
  return field;
}

void write_samples(std::ostream& os, const std::vector<InterfaceSample>& samples) {
  char buf[192];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n", s.x.x(), s.x.y(),
                  s.normal.x(), s.normal.y(), s.speed);
    os << buf;
  }
}

void write_velocity(std::ostream& os, const VelocityField& field) {
  char buf[192];
  const GridMesh& mesh = field.mesh();
  for (std::size_t c = 0; c < field.size(); ++c) {
    const Vec2 x = mesh.cell_center(c);
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", x.x(), x.y(), field[c].x(),
                  field[c].y());
    os << buf;
  }
}

}  // namespace invasion
