#include "wavelab/mechanics/action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wavelab::mechanics {

namespace {

// Stencils of the first-derivative operator reach two nodes at the boundary.
constexpr int kStencilReach = 2;

FamilyMember to_member(const Trajectory& traj, const Potential& potential, double energy_shift) {
  const std::vector<double> action = cumulative_action(traj, potential);
  FamilyMember member(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double lagrangian = traj.kinetic(k) - potential.value(traj.positions[k]);
    member[k] = FamilyPoint{traj.times[k], traj.positions[k], traj.velocities[k],
                            action[k] + energy_shift * traj.times[k], lagrangian + energy_shift};
  }
  return member;
}

double box_diagonal(const Grid& g) {
  return g.dims() == 2 ? std::hypot(g.extent(0), g.extent(1)) : g.extent(0);
}

bool near_grid(const Grid& g, Vec2 p) {
  const double mx = g.spacing(0);
  if (p.x < g.origin(0) - mx || p.x > g.upper(0) + mx) return false;
  if (g.dims() == 2) {
    const double my = g.spacing(1);
    if (p.y < g.origin(1) - my || p.y > g.upper(1) + my) return false;
  }
  return true;
}

Mask combined(const Mask& a, const Mask& b) {
  Mask out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] && b[k];
  return out;
}

}  // namespace

ActionSurface action_surface_fixed_energy(const Potential& potential, const Grid& grid,
                                          std::span<const Launch> launches, double energy, double mass,
                                          double dt) {
  if (launches.empty()) throw ValidationError("launch set is empty");
  if (!(mass > 0.0) || !(dt > 0.0)) throw ValidationError("mass and dt must be positive");

  std::vector<FamilyMember> members;
  for (const Launch& launch : launches) {
    const double kinetic = energy - potential.value(launch.position);
    if (!(kinetic > 0.0)) continue;  // classically forbidden launch point
    const double speed = std::sqrt(2.0 * kinetic / mass);
    Vec2 dir = launch.direction;
    if (grid.dims() == 1) dir = {dir.x >= 0.0 ? 1.0 : -1.0, 0.0};
    const double dn = norm(dir);
    if (!(dn > 0.0)) throw ValidationError("launch direction must be non-zero");
    dir = dir / dn;
    if (grid.dims() == 2 && !(dir.x > 0.0)) throw ValidationError("plane launches must point into +x");
    const Vec2 v0 = speed * dir;
    const double sign = dir.x;
    // Generous step cap: ten crossings of the box at the launch speed.
    const auto max_steps = static_cast<std::size_t>(std::ceil(10.0 * box_diagonal(grid) / (speed * dt))) + 16;
    const Trajectory traj = integrate_trajectory_while(
        potential, launch.position, v0, dt, max_steps, mass, [&](Vec2 x, Vec2 v) {
          if (!near_grid(grid, x)) return false;
          return grid.dims() == 1 ? v.x * sign > 0.0 : v.x > 0.0;
        });
    if (traj.size() >= 2) members.push_back(to_member(traj, potential, energy));
  }
  if (members.empty()) throw ValidationError("no launch reaches the grid at this energy");

  AssembledField assembled = assemble_family(grid, members);
  if (std::none_of(assembled.valid.begin(), assembled.valid.end(), [](std::uint8_t v) { return v != 0; })) {
    throw NumericalError("empty reachable set");
  }
  ActionSurface surface{std::move(assembled.values), std::move(assembled.valid),
                        std::move(assembled.multivalued), energy, 0.0,
                        std::vector<Launch>(launches.begin(), launches.end())};
  return surface;
}

std::vector<ActionSurface> action_surface_point_source(const Potential& potential, const Grid& line, double x0,
                                                       std::span<const double> launch_velocities,
                                                       std::span<const double> times, double mass, double dt) {
  if (line.dims() != 1) throw GridError("point-source action surfaces need a line grid");
  if (launch_velocities.size() < 4) throw ValidationError("need at least four launch velocities");
  if (times.empty()) throw ValidationError("no arrival times requested");
  const double t_max = *std::max_element(times.begin(), times.end());
  if (!(*std::min_element(times.begin(), times.end()) > 0.0)) throw ValidationError("arrival times must be > 0");
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt)) + 1;

  std::vector<FamilyMember> members;
  for (double v0 : launch_velocities) {
    const Trajectory traj = integrate_trajectory(potential, {x0, 0.0}, {v0, 0.0}, dt, steps, mass);
    members.push_back(to_member(traj, potential, 0.0));
  }

  std::vector<ActionSurface> out;
  for (double t : times) {
    // Hermite-interpolate every member at time t.
    std::vector<std::pair<double, double>> arrivals;
    for (const FamilyMember& m : members) {
      const auto k = std::min(static_cast<std::size_t>(t / dt), m.size() - 2);
      const FamilyPoint& a = m[k];
      const FamilyPoint& b = m[k + 1];
      const double h = b.tau - a.tau;
      const double s = (t - a.tau) / h;
      const double s2 = s * s;
      const double s3 = s2 * s;
      const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
      const double x = h00 * a.pos.x + h10 * h * a.dpos.x + h01 * b.pos.x + h11 * h * b.dpos.x;
      const double value = h00 * a.value + h10 * h * a.dvalue + h01 * b.value + h11 * h * b.dvalue;
      arrivals.emplace_back(x, value);
    }
    // Split the fan (in launch order) into runs with monotone arrival points.
    std::vector<double> best(line.size(), std::numeric_limits<double>::infinity());
    std::vector<int> hits(line.size(), 0);
    std::size_t start = 0;
    while (start + 1 < arrivals.size()) {
      const bool up = arrivals[start + 1].first > arrivals[start].first;
      std::size_t end = start + 1;
      while (end + 1 < arrivals.size() && (arrivals[end + 1].first > arrivals[end].first) == up) ++end;
      std::vector<double> xs;
      std::vector<double> vs;
      for (std::size_t k = start; k <= end; ++k) {
        xs.push_back(arrivals[k].first);
        vs.push_back(arrivals[k].second);
      }
      if (!up) {
        std::reverse(xs.begin(), xs.end());
        std::reverse(vs.begin(), vs.end());
      }
      if (xs.size() >= 2 && std::adjacent_find(xs.begin(), xs.end()) == xs.end()) {
        const AssembledField run = scattered_to_line(line, xs, vs);
        for (std::size_t i = 0; i < line.size(); ++i) {
          if (!run.valid[i]) continue;
          ++hits[i];
          best[i] = std::min(best[i], run.values[i]);
        }
      }
      start = end;
    }
    std::vector<double> values(line.size(), 0.0);
    Mask valid(line.size(), 0);
    Mask multi(line.size(), 0);
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (hits[i] == 0) continue;
      valid[i] = 1;
      values[i] = best[i];
      multi[i] = hits[i] > 1 ? 1 : 0;
    }
    ActionSurface surface{RealField(line, std::move(values)), std::move(valid), std::move(multi), 0.0, t,
                          {Launch{{x0, 0.0}, {1.0, 0.0}}}};
    out.push_back(std::move(surface));
  }
  return out;
}

ResidualField hj_residual_stationary(const ActionSurface& surface, const Potential& potential, double energy,
                                     double mass) {
  const Grid& g = surface.action.grid();
  const RealField g2 = gradient_squared(surface.action);
  std::vector<double> out(g.size(), 0.0);
  Mask single(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    out[k] = g2[k] - 2.0 * mass * (energy - potential.value(g.position(k)));
    single[k] = surface.valid[k] && !surface.multivalued[k];
  }
  Mask mask = erode(g, single, kStencilReach);
  RealField residual(g, std::move(out));
  ResidualStats stats = residual_stats(residual, mask);
  return {std::move(residual), std::move(mask), stats};
}

RealField hj_residual_time_dependent(const TimeTriple<double>& action, const Potential& potential, double mass) {
  const RealField rate = time_derivative(action);
  const RealField g2 = gradient_squared(action.current);
  const Grid& g = action.current.grid();
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = rate[k] + g2[k] / (2.0 * mass) + potential.value(g.position(k));
  }
  return RealField(g, std::move(out));
}

ResidualField hj_residual_time_dependent(const ActionSurface& previous, const ActionSurface& current,
                                         const ActionSurface& next, const Potential& potential, double mass) {
  const double dt_a = current.time - previous.time;
  const double dt_b = next.time - current.time;
  if (!(dt_a > 0.0) || std::abs(dt_a - dt_b) > 1e-12 * std::max(1.0, dt_a)) {
    throw ValidationError("snapshots must be equally spaced in time");
  }
  RealField residual = hj_residual_time_dependent(
      TimeTriple<double>{previous.action, current.action, next.action, dt_a}, potential, mass);
  Mask all = combined(combined(previous.valid, current.valid), next.valid);
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (previous.multivalued[k] || current.multivalued[k] || next.multivalued[k]) all[k] = 0;
  }
  Mask mask = erode(current.action.grid(), all, kStencilReach);
  ResidualStats stats = residual_stats(residual, mask);
  return {std::move(residual), std::move(mask), stats};
}

std::vector<RealField> momentum_from_action(const RealField& action) { return gradient(action); }

RealField energy_from_action(const TimeTriple<double>& action) {
  return time_derivative(action).map([](double v) { return -v; });
}

}  // namespace wavelab::mechanics
