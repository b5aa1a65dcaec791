#include "wavelab/core/grid.hpp"

#include <cmath>
#include <sstream>

#include "wavelab/core/error.hpp"

namespace wavelab {

Grid::Grid(int dims, std::array<double, 2> origins, std::array<double, 2> extents,
           std::array<std::size_t, 2> points)
    : dims_(dims), origins_(origins), extents_(extents), points_(points) {
  for (int axis = 0; axis < dims_; ++axis) {
    if (!(std::isfinite(extents_[axis]) && extents_[axis] > 0.0)) {
      throw GridError("grid extent must be finite and strictly positive");
    }
    if (!std::isfinite(origins_[axis])) {
      throw GridError("grid origin must be finite");
    }
    if (points_[axis] < kMinPoints) {
      throw GridError("grid needs at least 8 points per axis");
    }
    spacings_[axis] = extents_[axis] / static_cast<double>(points_[axis] - 1);
  }
}

Grid Grid::line(double origin, double extent, std::size_t points) {
  return Grid(1, {origin, 0.0}, {extent, 0.0}, {points, 1});
}

Grid Grid::plane(Vec2 origin, Vec2 extents, std::size_t nx, std::size_t ny) {
  return Grid(2, {origin.x, origin.y}, {extents.x, extents.y}, {nx, ny});
}

Vec2 Grid::position(std::size_t k) const {
  const std::size_t i = k % points_[0];
  const std::size_t j = k / points_[0];
  return {coord(0, i), dims_ == 2 ? coord(1, j) : 0.0};
}

bool Grid::contains(Vec2 p) const {
  if (p.x < origins_[0] || p.x > upper(0)) return false;
  if (dims_ == 2 && (p.y < origins_[1] || p.y > upper(1))) return false;
  return true;
}

std::string Grid::describe() const {
  std::ostringstream out;
  out << dims_ << "D grid, points";
  for (int a = 0; a < dims_; ++a) out << ' ' << points_[a];
  out << ", extents";
  for (int a = 0; a < dims_; ++a) out << ' ' << extents_[a];
  return out.str();
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    throw GridError(std::string(context) + ": grid mismatch");
  }
}

}  // namespace wavelab
