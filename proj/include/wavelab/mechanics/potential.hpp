#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::mechanics {

/// Potential energy U(r): analytic (value + gradient) or sampled on a grid.
class Potential {
 public:
  using ValueFn = std::function<double(Vec2)>;
  using GradientFn = std::function<Vec2(Vec2)>;

  static Potential analytic(ValueFn value, GradientFn gradient);
  static Potential zero();
  static Potential constant(double u0);
  /// U = -F . r, i.e. a uniform force F.
  static Potential uniform_force(Vec2 force);
  /// U = k |r - centre|^2 / 2.
  static Potential harmonic(double stiffness, Vec2 centre = {});
  /// Bilinear interpolation of the samples and of their finite-difference gradient.
  static Potential sampled(RealField samples);

  double value(Vec2 r) const { return value_(r); }
  Vec2 gradient(Vec2 r) const { return gradient_(r); }
  Vec2 force(Vec2 r) const { return -gradient_(r); }

  /// Sampling domain for sampled potentials; analytic ones are unbounded.
  const std::optional<Grid>& domain() const noexcept { return domain_; }

  RealField sample(const Grid& grid) const;

 private:
  Potential(ValueFn value, GradientFn gradient, std::optional<Grid> domain);

  ValueFn value_;
  GradientFn gradient_;
  std::optional<Grid> domain_;
};

}  // namespace wavelab::mechanics
