#include "wavelab/optics/index_field.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/calculus.hpp"

namespace wavelab::optics {

namespace {

constexpr double kMinIndex = 1e-6;

double coordinate(Vec2 p, int axis) { return axis == 0 ? p.x : p.y; }

double evaluate(const IndexDescriptor& d, Vec2 p) {
  return std::visit(
      [p](const auto& desc) -> double {
        using T = std::decay_t<decltype(desc)>;
        if constexpr (std::is_same_v<T, ConstantIndex>) {
          return desc.n;
        } else if constexpr (std::is_same_v<T, LinearGradientIndex>) {
          return desc.n0 + desc.slope * coordinate(p, desc.axis);
        } else {
          return coordinate(p, desc.axis) < desc.position ? desc.n1 : desc.n2;
        }
      },
      d);
}

void check_positive(const RealField& n) {
  for (double v : n.values()) {
    if (!(v >= kMinIndex)) throw ValidationError("refractive index must be >= 1e-6 everywhere");
  }
}

}  // namespace

IndexField::IndexField(RealField sampled) : sampled_(std::move(sampled)) {
  check_positive(sampled_);
  sampled_gradient_ = wavelab::gradient(sampled_);
}

IndexField::IndexField(const Grid& grid, IndexDescriptor descriptor)
    : sampled_(RealField::sample(grid, [&](double x, double y) { return evaluate(descriptor, {x, y}); })),
      descriptor_(descriptor) {
  if (const auto* lin = std::get_if<LinearGradientIndex>(&descriptor)) {
    if (lin->axis < 0 || lin->axis >= grid.dims()) throw ValidationError("gradient axis out of range");
  }
  if (const auto* two = std::get_if<TwoMediaIndex>(&descriptor)) {
    if (two->axis < 0 || two->axis >= grid.dims()) throw ValidationError("interface axis out of range");
  }
  check_positive(sampled_);
  sampled_gradient_ = wavelab::gradient(sampled_);
}

double IndexField::value(Vec2 p) const {
  if (descriptor_) return evaluate(*descriptor_, p);
  return interpolate(sampled_, p);
}

Vec2 IndexField::gradient(Vec2 p) const {
  if (descriptor_) {
    if (const auto* lin = std::get_if<LinearGradientIndex>(&*descriptor_)) {
      return lin->axis == 0 ? Vec2{lin->slope, 0.0} : Vec2{0.0, lin->slope};
    }
    return {};  // piecewise constant away from the interface
  }
  Vec2 g{interpolate(sampled_gradient_[0], p), 0.0};
  if (grid().dims() == 2) g.y = interpolate(sampled_gradient_[1], p);
  return g;
}

double IndexField::nearest(Vec2 p) const {
  const Grid& g = grid();
  auto node = [&](int axis, double x) {
    const double u = std::round((x - g.origin(axis)) / g.spacing(axis));
    return static_cast<std::size_t>(std::clamp(u, 0.0, static_cast<double>(g.points(axis) - 1)));
  };
  const std::size_t i = node(0, p.x);
  const std::size_t j = g.dims() == 2 ? node(1, p.y) : 0;
  return sampled_.at(i, j);
}

}  // namespace wavelab::optics
