#pragma once

#include <span>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab {

/// One sample along a curve of a family (a ray or a classical trajectory).
///
/// `tau` is the curve parameter (arc length or time); `dpos` and `dvalue` are
/// derivatives with respect to it and drive cubic Hermite interpolation
/// between samples.
struct FamilyPoint {
  double tau = 0.0;
  Vec2 pos;
  Vec2 dpos;
  double value = 0.0;
  double dvalue = 0.0;
};

using FamilyMember = std::vector<FamilyPoint>;

struct AssembledField {
  RealField values;
  Mask valid;        ///< nodes reached by the family
  Mask multivalued;  ///< nodes reached by more than one branch (least value kept)
};

/// Transfers values carried along a family of curves onto grid nodes.
///
/// On a line, every node crossed by a member takes the Hermite-interpolated
/// value at the crossing. On a plane, members must advance in +x: each column
/// x_i collects one crossing per member, and nodes between neighbouring
/// members are filled by cubic Lagrange interpolation across the members.
/// Where branches overlap the least value wins and the node is flagged.
AssembledField assemble_family(const Grid& grid, std::span<const FamilyMember> members);

/// Cubic Lagrange interpolation of scattered, strictly increasing samples
/// (xs, ys) onto the nodes of a line grid. Nodes outside [xs.front(), xs.back()]
/// are left invalid.
AssembledField scattered_to_line(const Grid& grid, std::span<const double> xs, std::span<const double> ys);

}  // namespace wavelab
