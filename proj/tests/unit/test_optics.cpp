#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/error.hpp"
#include "wavelab/optics/eikonal.hpp"
#include "wavelab/optics/ray_tracer.hpp"
#include "wavelab/optics/snell.hpp"

using namespace wavelab;
using namespace wavelab::optics;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double heading(const Ray& r) { return std::atan2(r.direction.y, r.direction.x); }

}  // namespace

TEST_CASE("snell_wave worked example") {
  CHECK(snell_wave(30.0 * kDeg, 1.0, 1.5) / kDeg == doctest::Approx(19.4712206345).epsilon(1e-10));
  CHECK(snell_wave(0.0, 1.0, 1.5) == 0.0);
  CHECK(reflect(0.3) == 0.3);
}

TEST_CASE("snell_wave against arcsin over a sweep") {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double theta1 = (0.5 + 0.89 * k) * kDeg;
    const double n1 = 1.0 + 0.01 * (k % 7);
    const double n2 = 1.2 + 0.05 * (k % 11);
    const double expected = std::asin(n1 * std::sin(theta1) / n2);
    worst = std::max(worst, std::abs(snell_wave(theta1, n1, n2) - expected));
    // reciprocity: going back reproduces the incidence angle
    CHECK(snell_wave(snell_wave(theta1, n1, n2), n2, n1) == doctest::Approx(theta1).epsilon(1e-12));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("total internal reflection and missing corpuscular transmission") {
  CHECK_THROWS_AS(snell_wave(60.0 * kDeg, 1.5, 1.0), TotalInternalReflection);
  try {
    snell_wave(60.0 * kDeg, 1.5, 1.0);
  } catch (const TotalInternalReflection& e) {
    CHECK(e.sin_theta2() == doctest::Approx(1.5 * std::sin(60.0 * kDeg)));
  }
  // corpuscles speeding up bend toward the surface... and can fail to enter a slower medium
  CHECK_THROWS_AS(snell_corpuscular(60.0 * kDeg, 1.5, 1.0), NoTransmission);
  CHECK_THROWS_AS(snell_wave(0.1, -1.0, 1.0), ValidationError);
}

TEST_CASE("corpuscular and wave laws bend opposite ways") {
  for (double v1 : {0.5, 0.8, 1.0, 1.3}) {
    for (double v2 : {0.6, 0.9, 1.1, 2.0}) {
      if (v1 == v2) continue;
      const double theta1 = 20.0 * kDeg;
      // the same speeds expressed as refractive indices n = c / v
      double wave = 0.0, corp = 0.0;
      try {
        wave = snell_wave(theta1, 1.0 / v1, 1.0 / v2);
      } catch (const TotalInternalReflection&) {
        CHECK(v2 > v1);
        continue;
      }
      try {
        corp = snell_corpuscular(theta1, v1, v2);
      } catch (const NoTransmission&) {
        CHECK(v1 > v2);
        continue;
      }
      CHECK((wave - theta1) * (corp - theta1) < 0.0);
    }
  }
}

TEST_CASE("plane-wave phase has no eikonal residual") {
  const Grid g = Grid::plane({0.0, 0.0}, {4.0, 3.0}, 41, 31);
  const double omega = 2.0, c = 1.0, n = 1.3;
  const double k = n * omega / c;
  const Vec2 dir{std::cos(0.4), std::sin(0.4)};
  const RealField s = RealField::sample(g, [&](double x, double y) { return k * (dir.x * x + dir.y * y); });
  const RealField r = eikonal_residual(s, IndexField(g, ConstantIndex{n}), omega, c);
  CHECK(residual_stats(r, full_mask(g)).max_abs < 1e-11);

  const MaskedField vp = phase_velocity(s, omega);
  CHECK(vp.values[100] == doctest::Approx(c / n));
  CHECK(vp.masked_fraction() == 0.0);
  CHECK(local_wavelength(s).values[7] == doctest::Approx(2.0 * std::numbers::pi / k));
}

TEST_CASE("flat phase is masked") {
  const Grid g = Grid::line(0.0, 1.0, 16);
  const MaskedField vp = phase_velocity(RealField(g, 3.0), 1.0);
  CHECK(vp.masked_fraction() == 1.0);
}

TEST_CASE("time-dependent eikonal and wave equation for a travelling wave") {
  const Grid g = Grid::line(0.0, 5.0, 201);
  const double n = 1.5, c = 1.0, omega = 3.0, k = n * omega / c, dt = 1e-3;
  auto phase = [&](double t) { return RealField::sample(g, [&](double x, double) { return k * x - omega * t; }); };
  const RealField r = eikonal_residual_time_dependent({phase(-dt), phase(0.0), phase(dt), dt}, IndexField(g, ConstantIndex{n}), c);
  CHECK(residual_stats(r, full_mask(g)).max_abs < 1e-8);

  auto wave = [&](double t) {
    return ComplexField::sample(g, [&](double x, double) { return std::polar(1.0, k * x - omega * t); });
  };
  const double h = 1e-3;
  const RealField w = wave_equation_residual({wave(-h), wave(0.0), wave(h), h}, IndexField(g, ConstantIndex{n}), c);
  // stencil error only: k^4 dx^2 / 12
  const Mask interior = erode(g, full_mask(g), 1);
  CHECK(residual_stats(w, interior).max_abs < std::pow(k, 4) * 0.025 * 0.025 / 12.0 * 1.1);
}

TEST_CASE("phase gradient squared dominates as epsilon shrinks") {
  const Grid g = Grid::plane({-3.0, -3.0}, {6.0, 6.0}, 61, 61);
  const RealField a = RealField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 4.0); });
  const RealField st = RealField::sample(g, [](double x, double y) { return x + 0.2 * y * y; });
  const std::vector<double> eps{0.1, 0.05, 0.025};
  const auto rows = large_phase_scaling(a, st, eps);
  REQUIRE(rows.size() == 3);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    CHECK(rows[k].gradient_squared / rows[k + 1].gradient_squared == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rows[k].cross_term / rows[k + 1].cross_term == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rows[k].amplitude_laplacian == doctest::Approx(rows[k + 1].amplitude_laplacian));
  }
  for (const auto& row : rows) CHECK(row.dominant == 2);
}

TEST_CASE("vector refraction") {
  Vec2 out;
  const Vec2 u{std::cos(30.0 * kDeg), std::sin(30.0 * kDeg)};
  REQUIRE(refract(u, {-1.0, 0.0}, 1.0, 1.5, out));
  CHECK(std::atan2(out.y, out.x) / kDeg == doctest::Approx(19.4712206345));
  CHECK(norm(out) == doctest::Approx(1.0));
  const Vec2 steep{std::cos(60.0 * kDeg), std::sin(60.0 * kDeg)};
  CHECK_FALSE(refract(steep, {1.0, 0.0}, 1.5, 1.0, out));
  CHECK(out.x == doctest::Approx(-steep.x));
  CHECK(out.y == doctest::Approx(steep.y));
}

TEST_CASE("ray crossing a sharp interface follows snell_wave") {
  const Grid g = Grid::plane({0.0, -5.0}, {10.0, 10.0}, 101, 101);
  const IndexField n(g, TwoMediaIndex{0, 5.0, 1.0, 1.5});
  for (double deg : {10.0, 30.0, 45.0}) {
    const Ray start{{1.0, -3.0}, {std::cos(deg * kDeg), std::sin(deg * kDeg)}};
    const RayPath path = trace_ray(n, start, 0.01, 600);
    CHECK(path.refractions == 1);
    const double theta2 = heading(path.states.back());
    CHECK(std::abs(theta2 - snell_wave(deg * kDeg, 1.0, 1.5)) / kDeg < 0.1);
  }
}

TEST_CASE("ray reflects totally from a lower index") {
  const Grid g = Grid::plane({0.0, -5.0}, {10.0, 10.0}, 101, 101);
  const IndexField n(g, TwoMediaIndex{0, 5.0, 1.5, 1.0});
  const Ray start{{3.0, -4.0}, {std::cos(60.0 * kDeg), std::sin(60.0 * kDeg)}};
  const RayPath path = trace_ray(n, start, 0.01, 800);
  CHECK(path.reflections == 1);
  CHECK(path.states.back().direction.x < 0.0);
}

TEST_CASE("graded medium: step convergence and the conserved invariant") {
  const Grid g = Grid::plane({0.0, 0.0}, {10.0, 10.0}, 101, 101);
  const IndexField n(g, LinearGradientIndex{1, 1.2, 0.05});
  const Ray start{{1.0, 2.0}, {std::cos(0.5), std::sin(0.5)}};
  const RayPath coarse = trace_ray(n, start, 0.01, 500);
  const RayPath fine = trace_ray(n, start, 0.001, 5000);
  const Ray a = coarse.states.back();
  const Ray b = fine.states.back();
  CHECK(norm(a.position - b.position) < 1e-6);
  CHECK(std::abs(a.optical_path - b.optical_path) < 1e-6);
  // index varies only with y, so n dx/ds is constant along the ray
  const double invariant = n.value(start.position) * start.direction.x;
  for (const Ray& r : fine.states) REQUIRE(n.value(r.position) * r.direction.x == doctest::Approx(invariant).epsilon(1e-9));
  // bends toward the higher index
  CHECK(heading(b) > 0.5);
}

TEST_CASE("index field from samples") {
  const Grid g = Grid::plane({0.0, 0.0}, {1.0, 1.0}, 11, 11);
  const IndexField n(RealField::sample(g, [](double x, double y) { return 1.0 + x + 2.0 * y; }));
  CHECK(n.value({0.35, 0.45}) == doctest::Approx(1.0 + 0.35 + 0.9));
  CHECK(n.gradient({0.5, 0.5}).x == doctest::Approx(1.0));
  CHECK(n.gradient({0.5, 0.5}).y == doctest::Approx(2.0));
  CHECK_THROWS_AS(IndexField(RealField(g, 0.0)), ValidationError);
}
