#include "wavelab/mechanics/potential.hpp"

#include "wavelab/core/calculus.hpp"

namespace wavelab::mechanics {

Potential::Potential(ValueFn value, GradientFn gradient, std::optional<Grid> domain)
    : value_(std::move(value)), gradient_(std::move(gradient)), domain_(std::move(domain)) {}

Potential Potential::analytic(ValueFn value, GradientFn gradient) {
  if (!value || !gradient) throw ValidationError("analytic potential needs value and gradient");
  return Potential(std::move(value), std::move(gradient), std::nullopt);
}

Potential Potential::zero() { return constant(0.0); }

Potential Potential::constant(double u0) {
  return analytic([u0](Vec2) { return u0; }, [](Vec2) { return Vec2{}; });
}

Potential Potential::uniform_force(Vec2 force) {
  return analytic([force](Vec2 r) { return -dot(force, r); }, [force](Vec2) { return -force; });
}

Potential Potential::harmonic(double stiffness, Vec2 centre) {
  return analytic(
      [stiffness, centre](Vec2 r) {
        const Vec2 d = r - centre;
        return 0.5 * stiffness * dot(d, d);
      },
      [stiffness, centre](Vec2 r) { return stiffness * (r - centre); });
}

Potential Potential::sampled(RealField samples) {
  auto shared = std::make_shared<const RealField>(std::move(samples));
  auto grads = std::make_shared<const std::vector<RealField>>(wavelab::gradient(*shared));
  const bool plane = shared->grid().dims() == 2;
  Grid domain = shared->grid();
  return Potential([shared](Vec2 r) { return wavelab::interpolate(*shared, r); },
                   [grads, plane](Vec2 r) {
                     return Vec2{wavelab::interpolate((*grads)[0], r), plane ? wavelab::interpolate((*grads)[1], r) : 0.0};
                   },
                   std::move(domain));
}

RealField Potential::sample(const Grid& grid) const {
  return RealField::sample(grid, [this](double x, double y) { return value_({x, y}); });
}

}  // namespace wavelab::mechanics
