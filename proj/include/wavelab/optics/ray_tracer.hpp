#pragma once

#include <cstddef>
#include <vector>

#include "wavelab/core/vec2.hpp"
#include "wavelab/optics/index_field.hpp"

namespace wavelab::optics {

struct Ray {
  Vec2 position;
  Vec2 direction;  ///< unit vector
  double optical_path = 0.0;  ///< integral of n ds
  double arc_length = 0.0;
};

struct RayPath {
  std::vector<Ray> states;  ///< start state followed by one state per completed step
  bool left_domain = false;  ///< tracing stopped because the ray came within 2 cells of the boundary
  std::size_t refractions = 0;
  std::size_t reflections = 0;
};

/// Traces a ray through n(x, y) by integrating d/ds(n dr/ds) = grad n with RK4.
///
/// Where n jumps by more than 10% between neighbouring samples (or across the
/// plane of a two-media descriptor) the ray instead moves straight through
/// piecewise-constant media and is refracted at the crossed face by the vector
/// form of Snell's law; total internal reflection reflects it.
RayPath trace_ray(const IndexField& n, const Ray& start, double ds, std::size_t n_steps);

/// Refracts unit direction `u` at a surface with unit normal `normal` (any
/// orientation) going from index n1 into n2. Returns false and the mirrored
/// direction on total internal reflection.
bool refract(Vec2 u, Vec2 normal, double n1, double n2, Vec2& out);

}  // namespace wavelab::optics
