#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "wavelab/core/vec2.hpp"

namespace wavelab {

/// Uniform node-centred grid on a line or a rectangle.
///
/// Node i on an axis sits at origin + i * spacing, with
/// spacing = extent / (points - 1). Two-dimensional data is stored with the
/// x index running fastest: flat index = j * nx + i.
class Grid {
 public:
  static constexpr std::size_t kMinPoints = 8;

  static Grid line(double origin, double extent, std::size_t points);
  static Grid plane(Vec2 origin, Vec2 extents, std::size_t nx, std::size_t ny);

  int dims() const noexcept { return dims_; }
  std::size_t points(int axis) const { return points_.at(axis); }
  double extent(int axis) const { return extents_.at(axis); }
  double origin(int axis) const { return origins_.at(axis); }
  double spacing(int axis) const { return spacings_.at(axis); }
  double upper(int axis) const { return origins_.at(axis) + extents_.at(axis); }

  std::size_t nx() const noexcept { return points_[0]; }
  std::size_t ny() const noexcept { return points_[1]; }
  std::size_t size() const noexcept { return points_[0] * points_[1]; }

  std::size_t index(std::size_t i, std::size_t j = 0) const noexcept { return j * points_[0] + i; }
  double coord(int axis, std::size_t i) const { return origins_.at(axis) + static_cast<double>(i) * spacings_.at(axis); }
  /// Position of the node with flat index `k` (y = 0 on a line).
  Vec2 position(std::size_t k) const;
  bool contains(Vec2 p) const;

  std::string describe() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(int dims, std::array<double, 2> origins, std::array<double, 2> extents,
       std::array<std::size_t, 2> points);

  int dims_ = 1;
  std::array<double, 2> origins_{};
  std::array<double, 2> extents_{};
  std::array<std::size_t, 2> points_{1, 1};
  std::array<double, 2> spacings_{};
};

/// Throws GridError unless both grids are identical.
void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace wavelab
