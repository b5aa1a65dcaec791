#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/error.hpp"
#include "wavelab/mechanics/potential.hpp"
#include "wavelab/pilot/continuity_oracle.hpp"
#include "wavelab/pilot/ensemble.hpp"
#include "wavelab/pilot/equivariance.hpp"
#include "wavelab/pilot/guidance.hpp"
#include "wavelab/pilot/histogram.hpp"
#include "wavelab/pilot/sampling.hpp"
#include "wavelab/quantum/observables.hpp"
#include "wavelab/quantum/propagator.hpp"

using namespace wavelab;
using namespace wavelab::pilot;

namespace {

quantum::PropagatorConfig line_config(double dt) {
  quantum::PropagatorConfig c;
  c.dt = dt;
  return c;
}

std::vector<ComplexField> evolve(const ComplexField& psi0, const quantum::PropagatorConfig& c, std::size_t steps) {
  const quantum::Propagator p(RealField(psi0.grid(), 0.0), c);
  std::vector<ComplexField> out{psi0};
  std::vector<Complex> s = psi0.values();
  for (std::size_t n = 0; n < steps; ++n) {
    p.step_in_place(s);
    out.emplace_back(psi0.grid(), s);
  }
  return out;
}

}  // namespace

TEST_CASE("guidance velocity is J / rho at the nodes") {
  const Grid g = Grid::plane({-12.0, -12.0}, {24.0, 24.0}, 121, 121);
  const PhysicalConstants k{.hbar = 0.8, .mass = 1.7};
  const ComplexField a = gaussian_packet(g, {-1.0, 0.5}, 1.0, {1.5, -0.5});
  const ComplexField b = gaussian_packet(g, {1.0, -0.5}, 1.0, {-1.0, 0.7});
  std::vector<Complex> sum(g.size());
  for (std::size_t n = 0; n < sum.size(); ++n) sum[n] = a[n] + Complex{0.0, 0.6} * b[n];
  const ComplexField psi(g, sum);
  const GuidanceField field(psi, k);
  const auto j = quantum::probability_current(psi, k);
  const RealField rho = density(psi);
  double worst = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (rho[n] < 1e-6 * field.max_density()) continue;
    const Vec2 node = field.node_velocity(n);
    const Vec2 at = field.velocity(g.position(n));
    const double scale = std::max(1.0, std::hypot(j[0][n], j[1][n]) / rho[n]);
    worst = std::max({worst, std::abs(node.x - j[0][n] / rho[n]) / scale, std::abs(node.y - j[1][n] / rho[n]) / scale,
                      std::abs(at.x - node.x) / scale, std::abs(at.y - node.y) / scale});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("plane wave guides at hbar k / m") {
  const Grid g = Grid::line(0.0, 10.0, 201);
  const PhysicalConstants k{.hbar = 1.0, .mass = 2.0};
  const ComplexField psi = ComplexField::sample(g, [](double x, double) { return std::polar(1.0, 3.0 * x); });
  // central differences see sin(k dx) / dx instead of k
  const double discrete = 0.5 * std::sin(3.0 * 0.05) / 0.05;
  CHECK(guidance_velocity(psi, {4.35, 0.0}, k).x == doctest::Approx(discrete).epsilon(1e-12));
  CHECK(guidance_velocity(psi, {4.33, 0.0}, k).x == doctest::Approx(discrete).epsilon(1e-3));
}

TEST_CASE("node regions are refused") {
  const Grid g = Grid::line(-5.0, 10.0, 101);
  const ComplexField psi = ComplexField::sample(g, [](double x, double) { return Complex{x * std::exp(-x * x), 0.0}; });
  const GuidanceField field(psi, {});
  CHECK_THROWS_AS(field.velocity({0.0, 0.0}), NodeRegionError);
  Vec2 v;
  double rel = 1.0;
  CHECK_FALSE(field.try_velocity({0.0, 0.0}, v, rel));
  CHECK(rel < kNodeFloor);
  CHECK(field.try_velocity({0.7, 0.0}, v, rel));
  CHECK(v.x == doctest::Approx(0.0));  // real psi: no current
}

TEST_CASE("sampling is reproducible and thread independent") {
  const Grid g = Grid::plane({-8.0, -8.0}, {16.0, 16.0}, 81, 65);
  const RealField rho = density(gaussian_packet(g, {0.5, -0.5}, 0.8, {0.0, 0.0}));
  const auto a = sample_from_density(rho, 5000, 11, 1);
  const auto b = sample_from_density(rho, 5000, 11, 4);
  REQUIRE(a.positions.size() == 5000);
  CHECK(a.positions == b.positions);
  CHECK(a.dims == 2);
  double mx = 0.0, my = 0.0;
  for (Vec2 p : a.positions) {
    REQUIRE(g.contains(p));
    mx += p.x;
    my += p.y;
  }
  CHECK(mx / 5000 == doctest::Approx(0.5).epsilon(0.05));
  CHECK(my / 5000 == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(sample_from_density(rho, 10, 12).positions != sample_from_density(rho, 10, 11).positions);
  CHECK_THROWS_AS(sample_line(RealField(Grid::line(0, 1, 16), 0.0), 4, 1), ValidationError);
}

TEST_CASE("line samples follow the density") {
  const Grid g = Grid::line(-6.0, 12.0, 241);
  const RealField rho = RealField::sample(g, [](double x, double) { return std::exp(-x * x / 2.0) * (1.0 + 0.5 * std::sin(2 * x)); });
  const std::size_t n = 200000;
  const auto xs = sample_line(rho, n, 3);
  const Binning bins = central_binning(rho, 0.9999, 40);
  const auto h = histogram(xs, bins);
  const auto p = density_bins(rho, bins);
  // expected TV of a multinomial sample ~ sqrt(bins / (2 pi n))
  CHECK(tv_distance(h, p) < 2.0 * std::sqrt(40.0 / (2.0 * std::numbers::pi * n)));
}

TEST_CASE("histogram helpers") {
  const Binning b{0.0, 1.0, 4};
  CHECK(b.index(0.3) == 1);
  CHECK(b.index(1.0) == 4);
  CHECK(b.index(-0.1) == 4);
  const std::vector<double> xs{0.1, 0.2, 0.6, 2.0};
  CHECK(histogram(xs, b) == std::vector<double>{2, 0, 1, 0, 1});
  const std::vector<double> p{1, 1, 0}, q{0, 2, 2};
  CHECK(tv_distance(p, q) == doctest::Approx(0.5));
  CHECK_THROWS_AS((Binning{1.0, 0.0, 3}.validate()), ValidationError);
  const RealField flat(Grid::line(0.0, 1.0, 11), 1.0);
  const auto bins = density_bins(flat, Binning{0.0, 0.5, 5});
  CHECK(bins[0] == doctest::Approx(0.1));
  CHECK(bins[5] == doctest::Approx(0.5));
}

TEST_CASE("bohmian trajectories of a spreading gaussian scale with its width") {
  const Grid g = Grid::line(-30.0, 60.0, 1201);
  const double sigma0 = 1.0, dt = 0.005;
  const std::size_t steps = 800;
  const auto stream = evolve(gaussian_packet(g, {0.0, 0.0}, sigma0, {0.0, 0.0}), line_config(dt), steps);
  ParticleEnsemble start;
  start.positions = {{-1.5, 0.0}, {-0.4, 0.0}, {0.3, 0.0}, {1.1, 0.0}, {2.2, 0.0}};
  const TrajectoryRecord rec = advance_ensemble(start, stream, dt, {});
  const double t = dt * static_cast<double>(steps);
  const double width = std::sqrt(1.0 + std::pow(t / (2.0 * sigma0 * sigma0), 2.0));
  CHECK(rec.exit_count == 0);
  for (std::size_t n = 0; n < start.positions.size(); ++n) {
    const double expected = start.positions[n].x * width;
    CHECK(std::abs(rec.positions.back()[n].x / expected - 1.0) < 0.005);
  }
}

TEST_CASE("1D trajectories never cross") {
  const Grid g = Grid::line(-30.0, 60.0, 801);
  const ComplexField a = gaussian_packet(g, {-5.0, 0.0}, 1.0, {2.0, 0.0});
  const ComplexField b = gaussian_packet(g, {5.0, 0.0}, 1.0, {-2.0, 0.0});
  std::vector<Complex> sum(g.size());
  for (std::size_t n = 0; n < sum.size(); ++n) sum[n] = a[n] + b[n];
  const ComplexField psi0 = normalize(ComplexField(g, sum));
  const double dt = 0.01;
  const auto stream = evolve(psi0, line_config(dt), 500);
  auto ensemble = sample_from_density(density(psi0), 2000, 5);
  std::sort(ensemble.positions.begin(), ensemble.positions.end(), [](Vec2 p, Vec2 q) { return p.x < q.x; });
  const TrajectoryRecord rec = advance_ensemble(ensemble, stream, dt, {});
  for (const auto& snap : rec.positions) {
    for (std::size_t n = 0; n + 1 < snap.size(); ++n) {
      if (rec.flagged[n] || rec.flagged[n + 1]) continue;
      REQUIRE(snap[n].x <= snap[n + 1].x);
    }
  }
  // no particle passes x = 0 in the symmetric collision
  std::size_t left = 0;
  for (Vec2 p : ensemble.positions) left += p.x < 0.0;
  std::size_t left_end = 0;
  for (Vec2 p : rec.positions.back()) left_end += p.x < 0.0;
  CHECK(left == left_end);
}

TEST_CASE("ensemble advancer marks particles leaving the grid") {
  // a stationary plane wave carries everything off the right edge
  const Grid g = Grid::line(-10.0, 20.0, 401);
  const ComplexField wave = ComplexField::sample(g, [](double x, double) { return std::polar(1.0, 6.0 * x); });
  const std::vector<ComplexField> stream(200, wave);
  ParticleEnsemble start;
  start.positions = {{0.0, 0.0}, {-0.2, 0.0}};
  const TrajectoryRecord rec = advance_ensemble(start, stream, 0.01, {});
  CHECK(rec.exit_count == 2);
  CHECK(rec.loss_fraction() == 1.0);
  CHECK(rec.survivors().empty());
}

TEST_CASE("continuity oracle conserves mass and transports a profile") {
  const Grid g = Grid::line(0.0, 10.0, 501);
  const RealField rho0 = RealField::sample(g, [](double x, double) { return std::exp(-(x - 3.0) * (x - 3.0) * 4.0); });
  const auto v = [&](double) { return std::vector<RealField>{RealField(g, 1.0)}; };
  const ContinuityOracleConfig cfg{.t0 = 0.0, .dt = 0.01, .steps = 200, .periodic = true};
  const RealField rho = continuity_oracle(rho0, v, cfg);
  CHECK(oracle_mass(rho, true) == doctest::Approx(oracle_mass(rho0, true)).epsilon(1e-13));
  // peak moved by v t = 2 (donor cell smears it but keeps the centroid)
  double m = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    m += rho[i];
    mx += rho[i] * g.coord(0, i);
  }
  CHECK(mx / m == doctest::Approx(5.0).epsilon(1e-3));
  ContinuityOracleConfig fast = cfg;
  fast.dt = 0.05;
  CHECK_THROWS_AS(continuity_oracle(rho0, v, fast), CflError);
}

TEST_CASE("continuity oracle agrees with the quantum density") {
  // Density moved by the guidance field must follow |psi|^2.
  const Grid g = Grid::line(-20.0, 40.0, 801);
  const double dt = 0.005;
  const auto stream = evolve(gaussian_packet(g, {0.0, 0.0}, 1.0, {0.5, 0.0}), line_config(dt), 400);
  const PhysicalConstants k;
  const auto velocity = [&](double t) {
    const double f = t / dt;
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(f), stream.size() - 2);
    const double w = f - static_cast<double>(n);
    const GuidanceField a(stream[n], k), b(stream[n + 1], k);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double rho = std::norm(stream[n][i]);
      v[i] = rho > 1e-12 ? (1.0 - w) * a.node_velocity(i).x + w * b.node_velocity(i).x : 0.0;
    }
    return std::vector<RealField>{RealField(g, v)};
  };
  const RealField rho = continuity_oracle(density(stream.front()), velocity, {.dt = dt, .steps = 400});
  const RealField exact = density(stream.back());
  const Binning bins = central_binning(exact, 0.9999, 50);
  CHECK(tv_distance(density_bins(rho, bins), density_bins(exact, bins)) < 0.02);
}

TEST_CASE("equivariance holds on a reduced run") {
  const Grid g = Grid::line(-20.0, 40.0, 256);
  EquivarianceConfig cfg;
  cfg.count = 20000;
  cfg.steps = 200;
  cfg.checkpoints = 4;
  const auto report = equivariance_test(gaussian_packet(g, {0.0, 0.0}, 1.0, {0.5, 0.0}), RealField(g, 0.0),
                                        line_config(0.01), cfg);
  CHECK(report.samples.size() == 5);
  CHECK(report.holds(2.0));
  CHECK(report.samples.front().time == 0.0);
  CHECK(report.samples.back().step == 200);
  CHECK_THROWS_AS(equivariance_test(ComplexField(g, Complex{0.1, 0.0}), RealField(g, 0.0), line_config(0.01), cfg),
                  ValidationError);
}
