#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "invasion/grid.hpp"
#include "invasion/levelset_geometry.hpp"
#include "invasion/macro_dynamics.hpp"
#include "invasion/micro_dynamics.hpp"

namespace invasion {

struct InterfaceSample {
  std::size_t cell = 0;
  Vec2 x = Vec2::Zero();
  /// Outward unit normal of the segment.
  Vec2 normal = Vec2::Zero();
  /// Source amplitude fed to the micro problem.
  double amplitude = 0.0;
  /// Signed micro speed.
  double speed = 0.0;
  /// |speed| * normal.
  Vec2 velocity = Vec2::Zero();
};

/// One sample per interface segment, at its midpoint, in cell order (saddle
/// cells contribute two). Throws DegenerateDomainError without cut cells.
std::vector<InterfaceSample> sample_interface(const CutClassification& cuts);

/// Sets amplitude for every sample from the ball average of c.
void attach_sources(std::vector<InterfaceSample>& samples, const MacroState& state,
                    const CutClassification& cuts, double R_m);

/// Sets speed and velocity from already solved micro problems (same order as samples).
void attach_velocities(std::vector<InterfaceSample>& samples,
                       const std::vector<MicroSolution>& micro, double c_vel,
                       const MicroParams& params);

/// Source, micro solve and speed for every sample.
void attach_speeds(std::vector<InterfaceSample>& samples, const MacroState& state,
                   const CutClassification& cuts, const MicroParams& params, double R_m,
                   double c_vel);

/// Piecewise constant velocity, one 2-vector per cell.
class VelocityField {
 public:
  VelocityField() = default;
  explicit VelocityField(const GridMesh& mesh)
      : mesh_(mesh), cell_velocity_(mesh.num_cells(), Vec2::Zero()) {}

  const GridMesh& mesh() const noexcept { return mesh_; }
  const Vec2& operator[](std::size_t cell) const { return cell_velocity_[cell]; }
  Vec2& operator[](std::size_t cell) { return cell_velocity_[cell]; }
  std::size_t size() const noexcept { return cell_velocity_.size(); }
  double max_norm() const noexcept;
  bool is_zero() const noexcept;

 private:
  GridMesh mesh_;
  std::vector<Vec2> cell_velocity_;
};

/// Every cell takes the velocity of the sample nearest to its center (ties to
/// the lower sample index); cells farther than rho from every sample get zero.
VelocityField extend_velocity(const std::vector<InterfaceSample>& samples, const GridMesh& mesh,
                              double rho);

/// "x y nx ny s" per sample.
void write_samples(std::ostream& os, const std::vector<InterfaceSample>& samples);
/// "cx cy wx wy" per cell.
void write_velocity(std::ostream& os, const VelocityField& field);

}  // namespace invasion
