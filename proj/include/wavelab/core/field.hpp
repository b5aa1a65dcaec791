#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wavelab/core/error.hpp"
#include "wavelab/core/grid.hpp"

namespace wavelab {

using Complex = std::complex<double>;

namespace detail {
inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
}  // namespace detail

/// Immutable sampled function on a Grid.
template <class T>
class Field {
 public:
  using value_type = T;

  Field(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw GridError("field value count does not match grid");
    }
    for (const T& v : values_) {
      if (!detail::is_finite(v)) throw ValidationError("field values must be finite");
    }
  }

  explicit Field(Grid grid, T fill = T{}) : grid_(std::move(grid)), values_(grid_.size(), fill) {
    if (!detail::is_finite(fill)) throw ValidationError("field values must be finite");
  }

  /// Samples `f(x, y)` at every node (y = 0 on a line).
  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    std::vector<T> values(grid.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      const Vec2 p = grid.position(k);
      values[k] = static_cast<T>(f(p.x, p.y));
    }
    return Field(grid, std::move(values));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<T>& values() const noexcept { return values_; }
  std::span<const T> span() const noexcept { return values_; }
  const T& operator[](std::size_t k) const { return values_[k]; }
  const T& at(std::size_t i, std::size_t j = 0) const { return values_[grid_.index(i, j)]; }

  std::vector<T> release() && { return std::move(values_); }

  template <class F>
  auto map(F&& f) const {
    using R = std::decay_t<decltype(f(values_[0]))>;
    std::vector<R> out(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) out[k] = f(values_[k]);
    return Field<R>(grid_, std::move(out));
  }

 private:
  Grid grid_;
  std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

/// Three equally spaced snapshots (t - dt, t, t + dt) of a field.
template <class T>
struct TimeTriple {
  Field<T> previous;
  Field<T> current;
  Field<T> next;
  double dt;
};

/// Physical constants in natural units by default.
struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double c = 1.0;
  double omega = 1.0;

  void validate() const;
};

inline void PhysicalConstants::validate() const {
  for (double v : {hbar, mass, c, omega}) {
    if (!(std::isfinite(v) && v > 0.0)) throw ValidationError("physical constants must be strictly positive");
  }
}

/// Node mask: 1 = value meaningful, 0 = masked out.
using Mask = std::vector<std::uint8_t>;

}  // namespace wavelab
