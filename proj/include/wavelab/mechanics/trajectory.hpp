#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wavelab/mechanics/potential.hpp"

namespace wavelab::mechanics {

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  double mass = 1.0;

  std::size_t size() const noexcept { return times.size(); }
  double kinetic(std::size_t k) const { return 0.5 * mass * dot(velocities[k], velocities[k]); }
};

/// Velocity-Verlet integration of m x'' = -grad U for n_steps steps.
/// A sampled potential throws DomainError when the particle leaves its grid.
Trajectory integrate_trajectory(const Potential& potential, Vec2 x0, Vec2 v0, double dt, std::size_t n_steps,
                                double mass);

/// As above, but stops early once `keep_going(position, velocity)` returns false
/// (the rejected state is not recorded).
Trajectory integrate_trajectory_while(const Potential& potential, Vec2 x0, Vec2 v0, double dt,
                                      std::size_t max_steps, double mass,
                                      const std::function<bool(Vec2, Vec2)>& keep_going);

/// Total energy at sample k.
double energy(const Trajectory& trajectory, const Potential& potential, std::size_t k);

/// Trapezoidal integral of L = m v^2 / 2 - U along the trajectory.
double action_along(const Trajectory& trajectory, const Potential& potential);

/// Running trapezoidal action at every sample (first entry 0).
std::vector<double> cumulative_action(const Trajectory& trajectory, const Potential& potential);

}  // namespace wavelab::mechanics
