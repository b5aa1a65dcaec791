#pragma once

#include <span>
#include <vector>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/family.hpp"
#include "wavelab/mechanics/trajectory.hpp"

namespace wavelab::mechanics {

struct Launch {
  Vec2 position;
  Vec2 direction;  ///< normalized internally
};

/// Action sampled on a grid, with the family that generated it.
struct ActionSurface {
  RealField action;
  Mask valid;        ///< nodes reached by a real trajectory
  Mask multivalued;  ///< caustic nodes: several branches arrive, least action kept
  double energy = 0.0;  ///< common energy (fixed-energy surfaces)
  double time = 0.0;    ///< arrival time (point-source surfaces)
  std::vector<Launch> launches;
};

/// Builds S(r) for a beam of particles sharing energy E by shooting real
/// trajectories from each launch and transferring S_E = int (L + E) dt along
/// them onto the grid, so that grad S_E = p. Nodes no trajectory reaches
/// (for example where U > E) are masked.
///
/// On a line every launch fires along its direction's x sign and stops at
/// the turning point. On a plane launches must point into +x and stop when
/// they turn back.
ActionSurface action_surface_fixed_energy(const Potential& potential, const Grid& grid,
                                          std::span<const Launch> launches, double energy, double mass,
                                          double dt);

/// Builds S(x, t) on a line for particles leaving x0 at t = 0 with each of the
/// launch velocities: at every requested time the actions of the fan are
/// interpolated across the arrival points.
std::vector<ActionSurface> action_surface_point_source(const Potential& potential, const Grid& line, double x0,
                                                       std::span<const double> launch_velocities,
                                                       std::span<const double> times, double mass, double dt);

struct ResidualField {
  RealField residual;
  Mask mask;  ///< nodes whose stencils only touch valid nodes
  ResidualStats stats;
};

/// (grad S)^2 - 2 m (E - U) on unmasked nodes.
ResidualField hj_residual_stationary(const ActionSurface& surface, const Potential& potential, double energy,
                                     double mass);

/// dS/dt + (grad S)^2 / 2m + U at the middle snapshot.
RealField hj_residual_time_dependent(const TimeTriple<double>& action, const Potential& potential, double mass);

/// Same, restricted to nodes valid in all three surfaces.
ResidualField hj_residual_time_dependent(const ActionSurface& previous, const ActionSurface& current,
                                         const ActionSurface& next, const Potential& potential, double mass);

/// p = grad S.
std::vector<RealField> momentum_from_action(const RealField& action);

/// E = -dS/dt at the middle snapshot.
RealField energy_from_action(const TimeTriple<double>& action);

}  // namespace wavelab::mechanics
