#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/error.hpp"
#include "wavelab/gun/analysis.hpp"
#include "wavelab/gun/apparatus.hpp"
#include "wavelab/gun/experiment.hpp"
#include "wavelab/gun/screen.hpp"

using namespace wavelab;
using namespace wavelab::gun;

namespace {

// Smaller box than the defaults: slits 2 wide and 8 apart, screen 40 behind them.
ApparatusSpec compact(int experiment) {
  ApparatusSpec spec = default_apparatus(experiment, 2.0, 8.0);
  spec.origin = {0.0, -24.0};
  spec.extents = {72.0, 48.0};
  spec.nx = 864;
  spec.ny = 241;
  spec.sigma = 2.4;
  spec.packet_center = {22.0, 0.0};
  if (spec.barrier) spec.barrier->x = 22.0;
  spec.screen_x = 62.0;
  spec.duration = 8.0;
  spec.absorber_width = 4.0;
  spec.shots = 4000;
  spec.bins = 120;
  return spec;
}

RealField synthetic(const Grid& line, const std::function<double(double)>& f) {
  return RealField::sample(line, [&](double y, double) { return f(y); });
}

}  // namespace

TEST_CASE("default apparatus geometry") {
  const ApparatusSpec spec = default_apparatus(3);
  CHECK(spec.wavelength() == doctest::Approx(1.0));
  CHECK(spec.screen_distance() == doctest::Approx(64.0));
  CHECK(spec.steps() == 1200);
  REQUIRE(spec.barrier.has_value());
  CHECK(spec.barrier->slits.size() == 2);
  CHECK(spec.barrier->slits[1].center - spec.barrier->slits[0].center == doctest::Approx(8.0));
  CHECK(spec.validate().empty());
  CHECK(default_apparatus(2, 2.0).barrier->slits.at(0).width == 2.0);
  CHECK_FALSE(default_apparatus(1).barrier.has_value());
  CHECK_THROWS_AS(default_apparatus(4), ValidationError);
  CHECK(to_string(detection_mode_from_string("bohm")) == "bohm");
  CHECK_THROWS_AS(detection_mode_from_string("many-worlds"), ValidationError);
}

TEST_CASE("inconsistent apparatus is rejected") {
  ApparatusSpec spec = default_apparatus(3);
  spec.screen_x = 20.0;  // in front of the barrier
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = default_apparatus(3, 0.1);
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec = default_apparatus(3);
  spec.sigma = 0.5;
  CHECK_FALSE(spec.validate().empty());
}

TEST_CASE("barrier transmission and masking") {
  const Barrier b{10.0, {{-2.0, 1.0}, {2.0, 1.0}}};
  CHECK(b.transmission(-2.3) == 1.0);
  CHECK(b.transmission(0.0) == 0.0);
  CHECK(b.transmission(2.6) == 0.0);

  const Grid g = Grid::plane({0.0, -5.0}, {20.0, 10.0}, 41, 101);
  const ComplexField flat = normalize(ComplexField(g, Complex{1.0, 0.0}));
  const MaskResult m = apply_mask(flat, b);
  // trapezoid weights across the rows
  double open = 0.0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double w = (j == 0 || j + 1 == g.ny()) ? 0.5 : 1.0;
    open += w * b.transmission(g.coord(1, j));
  }
  CHECK(m.transmitted == doctest::Approx(open / static_cast<double>(g.ny() - 1)).epsilon(1e-12));
  CHECK(m.discarded == doctest::Approx(1.0 - m.transmitted));
  CHECK(norm_squared_integral(m.psi) == doctest::Approx(1.0));
  CHECK_THROWS_AS(apply_mask(flat, Barrier{10.0, {{40.0, 1.0}}}), TransmissionError);
}

TEST_CASE("far-field minima and the fraunhofer guard") {
  const auto minima = double_slit_minima(1.0, 64.0, 8.0, 4);
  REQUIRE(minima.size() == 4);
  std::vector<double> sorted(minima);
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<double>{-12.0, -4.0, 4.0, 12.0});
  CHECK(fraunhofer_regime(1.0, 64.0, 8.0));
  CHECK_FALSE(fraunhofer_regime(1.0, 63.0, 8.0));
  const std::vector<double> ys{-4.1, 0.0, 3.9, 12.5, 7.0};
  CHECK(fraction_in_windows(ys, minima, 0.2) == doctest::Approx(0.4));
}

TEST_CASE("profile analysis on synthetic fringes") {
  const Grid line = Grid::line(-40.0, 80.0, 1601);
  const double spacing = 8.0;
  const RealField fringes = synthetic(line, [&](double y) {
    const double c = std::cos(std::numbers::pi * y / spacing);
    return (0.1 + c * c) * std::exp(-y * y / 800.0);
  });
  CHECK(fringe_spacing(fringes) == doctest::Approx(spacing).epsilon(0.01));
  // dips at 0.1 e^{..}, peaks at 1.1 e^{..}: visibility ~ 1 / 1.2
  CHECK(fringe_visibility(fringes) == doctest::Approx(1.0 / 1.2).epsilon(0.02));
  CHECK(mirror_asymmetry(fringes) < 1e-12);

  const RealField bump = synthetic(line, [](double y) { return std::exp(-(y - 3.0) * (y - 3.0) / 18.0); });
  CHECK(fwhm(bump) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * 3.0).epsilon(1e-3));
  CHECK(profile_mean(bump) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(mirror_asymmetry(bump) > 0.5);
  CHECK(local_maxima(fringes).size() >= 9);
}

TEST_CASE("screen flux of a plane wave") {
  const Grid g = Grid::plane({0.0, -5.0}, {20.0, 10.0}, 401, 51);
  const double k = 2.0;
  const PhysicalConstants c{.hbar = 1.0, .mass = 0.5};
  const ComplexField wave = ComplexField::sample(g, [&](double x, double) { return std::polar(0.5, k * x); });
  ScreenFluxAccumulator acc(g, 12.33, c);
  acc.add(wave, 0.5);
  acc.add(wave, 1.5);
  // discrete current: (hbar / m) sin(k dx) / dx |psi|^2
  const double dx = g.spacing(0);
  const double j = std::sin(k * dx) / dx / 0.5 * 0.25;
  for (double v : acc.raw()) CHECK(v == doctest::Approx(2.0 * j).epsilon(1e-12));
  const ScreenFlux flux = screen_flux_profile(acc);
  CHECK(flux.total == doctest::Approx(2.0 * j * 10.0).epsilon(1e-12));
  CHECK(integrate(flux.profile) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flux.negative_fraction == 0.0);

  ScreenFluxAccumulator back(g, 12.33, c);
  back.add(ComplexField::sample(g, [&](double x, double y) { return std::polar(0.5, (y < -2.0 ? -k : k) * x); }), 1.0);
  CHECK_THROWS_AS(screen_flux_profile(back), BackflowError);
  ScreenFluxAccumulator none(g, 12.33, c);
  none.add(ComplexField::sample(g, [&](double x, double) { return std::polar(0.5, -k * x); }), 1.0);
  CHECK_THROWS_AS(screen_flux_profile(none), TransmissionError);
  CHECK_THROWS_AS(ScreenFluxAccumulator(g, 30.0, c), DomainError);
}

TEST_CASE("detection histograms") {
  const Grid line = Grid::line(-2.0, 4.0, 41);
  const auto h = bin_detections({-1.9, -1.5, 0.1, 1.99, 5.0}, line, 4, "bohm");
  CHECK(h.counts == std::vector<double>{2, 0, 1, 1});
  CHECK(h.total_shots == 5);  // shots fired, including the one off the screen
  CHECK(h.center(0) == doctest::Approx(-1.5));
  CHECK(h.edges.size() == 5);
  const auto p = bin_profile(RealField(line, 0.25), 4);
  CHECK(p.counts[2] == doctest::Approx(0.25));
}

TEST_CASE("derived seeds differ by purpose and index") {
  CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("compact double slit shows far-field fringes") {
  const ApparatusSpec spec = compact(3);
  const ExperimentResult r = run_experiment(spec, 7);
  CHECK(r.detections.size() == spec.shots);
  CHECK(r.transmitted > 0.05);
  CHECK(r.transmitted < 0.5);
  const double expected = spec.wavelength() * spec.screen_distance() / 8.0;
  CHECK(fringe_spacing(r.flux.profile) == doctest::Approx(expected).epsilon(0.05));
  CHECK(fringe_visibility(r.flux.profile) > 0.8);
  CHECK(mirror_asymmetry(r.flux.profile) < 0.02);
  CHECK(r.flux.negative_fraction < kMaxBackflow);
  double sum = 0.0;
  for (double c : r.histogram.counts) sum += c;
  CHECK(sum == doctest::Approx(static_cast<double>(spec.shots)));
}

TEST_CASE("runs are reproducible and independent of the thread count") {
  ApparatusSpec spec = compact(2);
  spec.nx = 432;
  spec.ny = 121;
  spec.dt = 0.04;
  spec.barrier->slits[0].width = 4.0;
  spec.mode = DetectionMode::Bohm;
  spec.shots = 500;
  const ExperimentResult a = run_experiment(spec, 3);
  spec.threads = 3;
  const ExperimentResult b = run_experiment(spec, 3);
  CHECK(a.detections == b.detections);
  CHECK(a.flux.profile.values() == b.flux.profile.values());
  CHECK(a.detections.size() + a.undetected == spec.shots);
  const ExperimentResult c = run_experiment(spec, 4);
  CHECK(c.detections != a.detections);
}

TEST_CASE("copenhagen and bohmian screens agree") {
  ApparatusSpec spec = compact(3);
  spec.shots = 3000;
  spec.bins = 60;
  const ModeComparison cmp = compare_modes(spec, 11);
  CHECK(cmp.copenhagen.total_shots == cmp.bohm.detections.size());
  CHECK(cmp.bohm.detections.size() > 2500);
  CHECK(cmp.agrees);
  CHECK(cmp.tv < 2.0 * cmp.baseline);
}
