#include "wavelab/mechanics/trajectory.hpp"

#include <cmath>

namespace wavelab::mechanics {

namespace {

void check_inputs(double dt, double mass) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
  if (!(mass > 0.0)) throw ValidationError("mass must be positive");
}

}  // namespace

Trajectory integrate_trajectory_while(const Potential& potential, Vec2 x0, Vec2 v0, double dt,
                                      std::size_t max_steps, double mass,
                                      const std::function<bool(Vec2, Vec2)>& keep_going) {
  check_inputs(dt, mass);
  const auto& domain = potential.domain();
  auto check_domain = [&](Vec2 x) {
    if (domain && !domain->contains(x)) throw DomainError("trajectory left the sampled potential's domain");
  };
  check_domain(x0);

  Trajectory traj;
  traj.mass = mass;
  traj.times.reserve(max_steps + 1);
  traj.positions.reserve(max_steps + 1);
  traj.velocities.reserve(max_steps + 1);
  traj.times.push_back(0.0);
  traj.positions.push_back(x0);
  traj.velocities.push_back(v0);

  Vec2 x = x0;
  Vec2 v = v0;
  Vec2 a = potential.force(x) / mass;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    const Vec2 x_next = x + dt * v + (0.5 * dt * dt) * a;
    check_domain(x_next);
    const Vec2 a_next = potential.force(x_next) / mass;
    const Vec2 v_next = v + (0.5 * dt) * (a + a_next);
    if (keep_going && !keep_going(x_next, v_next)) break;
    x = x_next;
    v = v_next;
    a = a_next;
    traj.times.push_back(static_cast<double>(step) * dt);
    traj.positions.push_back(x);
    traj.velocities.push_back(v);
  }
  return traj;
}

Trajectory integrate_trajectory(const Potential& potential, Vec2 x0, Vec2 v0, double dt, std::size_t n_steps,
                                double mass) {
  return integrate_trajectory_while(potential, x0, v0, dt, n_steps, mass, {});
}

double energy(const Trajectory& trajectory, const Potential& potential, std::size_t k) {
  return trajectory.kinetic(k) + potential.value(trajectory.positions[k]);
}

std::vector<double> cumulative_action(const Trajectory& trajectory, const Potential& potential) {
  std::vector<double> out(trajectory.size(), 0.0);
  double prev_l = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double l = trajectory.kinetic(k) - potential.value(trajectory.positions[k]);
    if (k > 0) {
      out[k] = out[k - 1] + 0.5 * (trajectory.times[k] - trajectory.times[k - 1]) * (l + prev_l);
    }
    prev_l = l;
  }
  return out;
}

double action_along(const Trajectory& trajectory, const Potential& potential) {
  if (trajectory.size() == 0) return 0.0;
  return cumulative_action(trajectory, potential).back();
}

}  // namespace wavelab::mechanics
