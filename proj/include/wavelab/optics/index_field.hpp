#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::optics {

struct ConstantIndex {
  double n = 1.0;
};

/// n = n0 + slope * coordinate(axis).
struct LinearGradientIndex {
  int axis = 1;
  double n0 = 1.0;
  double slope = 0.0;
};

/// n1 below `position` along `axis`, n2 at and above it.
struct TwoMediaIndex {
  int axis = 0;
  double position = 0.0;
  double n1 = 1.0;
  double n2 = 1.0;
};

using IndexDescriptor = std::variant<ConstantIndex, LinearGradientIndex, TwoMediaIndex>;

/// Refractive index n(x, y): always sampled on a grid, optionally backed by an
/// analytic descriptor used for exact evaluation.
class IndexField {
 public:
  explicit IndexField(RealField sampled);
  IndexField(const Grid& grid, IndexDescriptor descriptor);

  const Grid& grid() const noexcept { return sampled_.grid(); }
  const RealField& field() const noexcept { return sampled_; }
  const std::optional<IndexDescriptor>& descriptor() const noexcept { return descriptor_; }

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;

  /// Value of the node nearest to p (piecewise-constant reading of the samples).
  double nearest(Vec2 p) const;

 private:
  RealField sampled_;
  std::optional<IndexDescriptor> descriptor_;
  std::vector<RealField> sampled_gradient_;
};

}  // namespace wavelab::optics
