#include <doctest.h>

#include <cmath>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/error.hpp"
#include "wavelab/mechanics/action.hpp"
#include "wavelab/mechanics/trajectory.hpp"

using namespace wavelab;
using namespace wavelab::mechanics;

namespace {

// Action of the classical path from x0 (t = 0) to x at time t under U = -F x.
double falling_action(double x, double t, double x0, double force, double m) {
  return m * (x - x0) * (x - x0) / (2.0 * t) + force * (x + x0) * t / 2.0 - force * force * t * t * t / (24.0 * m);
}

double fixed_energy_rms(std::size_t points, const Potential& u, double energy) {
  const Grid line = Grid::line(0.0, 1.5, points);
  const Launch launch{{0.0, 0.0}, {1.0, 0.0}};
  const auto surface = action_surface_fixed_energy(u, line, std::span(&launch, 1), energy, 1.0, 1e-4);
  return hj_residual_stationary(surface, u, energy, 1.0).stats.rms;
}

}  // namespace

TEST_CASE("potentials") {
  const Potential f = Potential::uniform_force({2.0, -1.0});
  CHECK(f.value({1.0, 1.0}) == doctest::Approx(-1.0));
  CHECK(f.force({3.0, 4.0}).x == doctest::Approx(2.0));
  const Potential h = Potential::harmonic(4.0, {1.0, 0.0});
  CHECK(h.value({2.0, 1.0}) == doctest::Approx(4.0));
  CHECK(h.gradient({2.0, 1.0}).y == doctest::Approx(4.0));
  const Grid g = Grid::plane({-2, -2}, {4, 4}, 41, 41);
  const Potential s = Potential::sampled(h.sample(g));
  CHECK(s.value({0.55, 0.25}) == doctest::Approx(h.value({0.55, 0.25})).epsilon(0.02));
  CHECK(s.domain().has_value());
}

TEST_CASE("verlet is exact for a uniform force") {
  const Potential u = Potential::uniform_force({0.0, -9.8});
  const Trajectory tr = integrate_trajectory(u, {0.0, 0.0}, {3.0, 10.0}, 0.01, 200, 2.0);
  const double t = tr.times.back();
  CHECK(t == doctest::Approx(2.0));
  CHECK(tr.positions.back().x == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(tr.positions.back().y == doctest::Approx(10.0 * t - 0.5 * 4.9 * t * t).epsilon(1e-12));
  CHECK(tr.velocities.back().y == doctest::Approx(10.0 - 4.9 * t).epsilon(1e-12));
}

TEST_CASE("verlet energy error stays bounded for an oscillator") {
  const Potential u = Potential::harmonic(1.0);
  const Trajectory tr = integrate_trajectory(u, {1.0, 0.0}, {0.0, 0.5}, 0.01, 100000, 1.0);
  const double e0 = energy(tr, u, 0);
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.size(); k += 97) worst = std::max(worst, std::abs(energy(tr, u, k) - e0));
  // second-order shadow energy: oscillation of size ~ dt^2 E / 8, no secular drift
  CHECK(worst < 1e-4 * e0);
  CHECK(std::abs(energy(tr, u, tr.size() - 1) - e0) < 1e-4 * e0);
}

TEST_CASE("sampled potential rejects leaving its grid") {
  const Grid g = Grid::plane({-1, -1}, {2, 2}, 21, 21);
  const Potential s = Potential::sampled(RealField(g, 0.0));
  CHECK_THROWS_AS(integrate_trajectory(s, {0.0, 0.0}, {1.0, 0.0}, 0.1, 50, 1.0), DomainError);
}

TEST_CASE("action along a free path") {
  const Trajectory tr = integrate_trajectory(Potential::zero(), {0.0, 0.0}, {2.0, 1.0}, 0.01, 300, 1.5);
  CHECK(action_along(tr, Potential::zero()) == doctest::Approx(0.5 * 1.5 * 5.0 * 3.0).epsilon(1e-12));
  const auto running = cumulative_action(tr, Potential::zero());
  CHECK(running.front() == 0.0);
  CHECK(running[150] == doctest::Approx(0.5 * 1.5 * 5.0 * 1.5).epsilon(1e-12));
}

TEST_CASE("fixed-energy surface: residual converges at second order") {
  for (const Potential& u : {Potential::uniform_force({-1.0, 0.0}), Potential::harmonic(0.8)}) {
    const double coarse = fixed_energy_rms(129, u, 2.0);
    const double fine = fixed_energy_rms(257, u, 2.0);
    CHECK(coarse / fine >= 3.5);
    CHECK(coarse / fine <= 4.5);
  }
}

TEST_CASE("fixed-energy surface: gradient of S is the trajectory momentum") {
  const Potential u = Potential::uniform_force({-1.0, 0.0});
  const double energy = 2.0, mass = 1.0;
  const Grid line = Grid::line(0.0, 1.5, 257);
  const Launch launch{{0.0, 0.0}, {1.0, 0.0}};
  const auto surface = action_surface_fixed_energy(u, line, std::span(&launch, 1), energy, mass, 1e-4);
  const RealField p = momentum_from_action(surface.action)[0];
  // real trajectory with the same energy, stopped at several times
  const Trajectory tr = integrate_trajectory(u, {0.0, 0.0}, {2.0, 0.0}, 1e-4, 6000, mass);
  for (std::size_t k : {1000u, 3000u, 6000u}) {
    const double x = tr.positions[k].x;
    const double terminal = mass * tr.velocities[k].x;
    CHECK(std::abs(interpolate(p, {x, 0.0}) - terminal) < 1e-3 * terminal);
  }
}

TEST_CASE("fixed-energy surface masks the forbidden region") {
  const Potential u = Potential::uniform_force({-1.0, 0.0});
  const Grid line = Grid::line(0.0, 3.0, 121);
  const Launch launch{{0.0, 0.0}, {1.0, 0.0}};
  const auto surface = action_surface_fixed_energy(u, line, std::span(&launch, 1), 2.0, 1.0, 1e-4);
  CHECK(surface.valid[20] == 1);
  CHECK(surface.valid[100] == 0);  // x = 2.5 > E
}

TEST_CASE("time-dependent Hamilton-Jacobi with a linear potential") {
  const double force = 0.7, mass = 1.3, x0 = 0.2, t = 2.0, h = 1e-4;
  const Potential u = Potential::uniform_force({force, 0.0});
  const Grid line = Grid::line(-2.0, 4.0, 81);
  auto surface = [&](double time) {
    return RealField::sample(line, [&](double x, double) { return falling_action(x, time, x0, force, mass); });
  };
  const RealField r = hj_residual_time_dependent({surface(t - h), surface(t), surface(t + h), h}, u, mass);
  CHECK(residual_stats(r, full_mask(line)).max_abs < 1e-8);

  const RealField e = energy_from_action({surface(t - h), surface(t), surface(t + h), h});
  // E = -dS/dt equals the kinetic plus potential energy of the path arriving at x
  const double x = line.coord(0, 40);
  const double v = (x - x0) / t + force * t / (2.0 * mass);
  CHECK(e[40] == doctest::Approx(0.5 * mass * v * v - force * x).epsilon(1e-7));
}

TEST_CASE("point-source surfaces match the analytic action") {
  const double force = 0.7, mass = 1.0, x0 = 0.0;
  const Potential u = Potential::uniform_force({force, 0.0});
  const Grid line = Grid::line(-1.0, 3.0, 81);
  std::vector<double> velocities;
  for (int k = 0; k <= 40; ++k) velocities.push_back(-2.0 + 0.15 * k);
  const std::vector<double> times{0.99, 1.0, 1.01};
  const auto surfaces = action_surface_point_source(u, line, x0, velocities, times, mass, 1e-4);
  REQUIRE(surfaces.size() == 3);
  double worst = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (!surfaces[1].valid[i]) continue;
    const double x = line.coord(0, i);
    worst = std::max(worst, std::abs(surfaces[1].action[i] - falling_action(x, 1.0, x0, force, mass)));
    ++counted;
  }
  CHECK(counted > 40);
  CHECK(worst < 1e-6);
  const auto residual = hj_residual_time_dependent(surfaces[0], surfaces[1], surfaces[2], u, mass);
  CHECK(residual.stats.max_abs < 1e-2);
}
