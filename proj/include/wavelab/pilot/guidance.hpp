#pragma once

#include <vector>

#include "wavelab/core/field.hpp"
#include "wavelab/core/vec2.hpp"

namespace wavelab::pilot {

/// Below this fraction of max |psi|^2 the velocity is not defined.
inline constexpr double kNodeFloor = 1e-14;

/// Velocity field v = (hbar/m) Im(psi* grad psi) / |psi|^2 of one snapshot.
///
/// The node current J and density |psi|^2 are interpolated bilinearly and
/// divided, so at a node the velocity is exactly J / |psi|^2.
class GuidanceField {
 public:
  GuidanceField(const ComplexField& psi, const PhysicalConstants& constants);

  const Grid& grid() const noexcept { return psi_.grid(); }
  const ComplexField& psi() const noexcept { return psi_; }
  double max_density() const noexcept { return max_density_; }

  /// |psi|^2 at p relative to its grid maximum.
  double relative_density(Vec2 p) const;

  /// Throws NodeRegionError where |psi|^2 < kNodeFloor * max.
  Vec2 velocity(Vec2 p) const;

  /// Non-throwing form: false in a node region. `relative` receives |psi|^2 / max.
  bool try_velocity(Vec2 p, Vec2& v, double& relative) const;

  Vec2 node_velocity(std::size_t k) const;

 private:
  ComplexField psi_;
  double hbar_over_m_;
  std::vector<double> rho_;
  std::vector<std::vector<double>> current_;  // per axis
  double max_density_ = 0.0;
};

Vec2 guidance_velocity(const ComplexField& psi, Vec2 point, const PhysicalConstants& constants);

}  // namespace wavelab::pilot
