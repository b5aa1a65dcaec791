#include "wavelab/gun/experiment.hpp"

#include <cmath>
#include <optional>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/rng.hpp"
#include "wavelab/pilot/ensemble.hpp"
#include "wavelab/pilot/histogram.hpp"
#include "wavelab/pilot/sampling.hpp"

namespace wavelab::gun {

namespace {

enum Purpose : std::uint64_t { kFlashes = 1, kParticles = 2, kComparison = 3, kBaseline = 4, kAbsorption = 5 };

double mean_x(const Grid& g, const std::vector<Complex>& psi) {
  std::vector<double> weight(g.nx(), 0.0);
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) weight[i] += std::norm(psi[g.index(i, j)]);
  }
  std::vector<double> moment(g.nx());
  for (std::size_t i = 0; i < g.nx(); ++i) moment[i] = weight[i] * g.coord(0, i);
  const double total = compensated_sum(weight);
  return total > 0.0 ? compensated_sum(moment) / total : 0.0;
}

// Bohmian detector: particles stop at their first crossing of the screen.
//
// The absorbing layer is a sink, d rho/dt + div J = -(2 W / hbar) rho, so
// particles inside it die at rate 2 W / hbar: each one draws an Exp(1)
// threshold at birth and is removed once its accumulated dose passes it.
class CrossingDetector {
 public:
  CrossingDetector(pilot::ParticleEnsemble ensemble, double screen_x, RealField sink, double hbar,
                   std::uint64_t seed, int threads)
      : advancer_(std::move(ensemble), threads),
        screen_x_(screen_x),
        sink_(std::move(sink)),
        rate_(2.0 / hbar),
        detected_(advancer_.positions().size(), 0),
        dose_(advancer_.positions().size(), 0.0),
        threshold_(advancer_.positions().size()) {
    for (std::size_t n = 0; n < threshold_.size(); ++n) {
      RandomStream stream(seed, n);
      threshold_[n] = -std::log1p(-stream.uniform());
    }
  }

  void advance(const pilot::GuidanceField& from, const pilot::GuidanceField& to, double dt) {
    const std::vector<Vec2> before = advancer_.positions();
    advancer_.advance(from, to, dt);
    const auto& after = advancer_.positions();
    for (std::size_t n = 0; n < after.size(); ++n) {
      if (detected_[n] || advancer_.exited()[n]) continue;
      const double w0 = interpolate(sink_, before[n]);
      const double w1 = interpolate(sink_, after[n]);
      if (w0 > 0.0 || w1 > 0.0) {
        dose_[n] += 0.5 * rate_ * dt * (w0 + w1);
        if (dose_[n] >= threshold_[n]) {
          ++absorbed_;
          advancer_.remove(n);
          continue;
        }
      }
      if (after[n].x >= screen_x_ && before[n].x < screen_x_) {
        const double s = (screen_x_ - before[n].x) / (after[n].x - before[n].x);
        ys_.push_back(before[n].y + s * (after[n].y - before[n].y));
        detected_[n] = 1;
        advancer_.remove(n);
      }
    }
  }

  const std::vector<double>& ys() const { return ys_; }
  std::size_t detected() const { return ys_.size(); }
  std::size_t absorbed() const { return absorbed_; }
  std::size_t exited() const { return advancer_.exit_count() - detected() - absorbed_; }
  std::size_t flagged() const { return advancer_.flag_count(); }
  std::size_t size() const { return detected_.size(); }

 private:
  pilot::EnsembleAdvancer advancer_;
  double screen_x_;
  RealField sink_;
  double rate_;
  std::vector<std::uint8_t> detected_;
  std::vector<double> dose_;
  std::vector<double> threshold_;
  std::vector<double> ys_;
  std::size_t absorbed_ = 0;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index) {
  RandomStream stream(seed, (purpose << 40) ^ index);
  return stream.bits();
}

ExperimentResult run_experiment(const ApparatusSpec& spec, std::uint64_t seed,
                                std::span<const quantum::Observer> observers) {
  std::vector<std::string> warnings = spec.validate();
  struct {
    double transmitted = 1.0;
    double discarded = 0.0;
    std::size_t mask_step = 0;
    std::size_t steps = 0;
  } result;
  const Grid grid = spec.grid();
  const ComplexField psi0 = gaussian_packet(grid, spec.packet_center, spec.sigma, {spec.k0, 0.0});

  quantum::PropagatorConfig config;
  config.dt = spec.dt;
  config.scheme = quantum::Scheme::ADI2D;
  config.absorber = quantum::AbsorbingLayer{spec.absorber_cells(0), spec.absorber_strength, spec.absorber_cells(1)};
  config.constants = spec.constants;
  config.threads = spec.threads;
  const quantum::Propagator propagator(RealField(grid, 0.0), config);

  ScreenFluxAccumulator screen(grid, spec.screen_x, spec.constants);
  std::vector<Complex> state = psi0.values();
  const bool bohm = spec.mode == DetectionMode::Bohm;
  std::optional<CrossingDetector> detector;
  std::optional<pilot::GuidanceField> guidance;
  bool masked = !spec.barrier.has_value();
  result.steps = spec.steps();

  auto start_particles = [&](std::size_t step) {
    if (!bohm) return;
    const ComplexField psi(grid, state);
    pilot::ParticleEnsemble ensemble =
        pilot::sample_from_density(density(psi), spec.shots, derive_seed(seed, kParticles), spec.threads);
    ensemble.birth_time = static_cast<double>(step) * spec.dt;
    detector.emplace(std::move(ensemble), spec.screen_x, propagator.absorber_profile(), spec.constants.hbar,
                     derive_seed(seed, kAbsorption), spec.threads);
    guidance.emplace(psi, spec.constants);
  };

  auto notify = [&](std::size_t step) {
    bool any = false;
    for (const auto& o : observers) {
      if (o.callback && (step % std::max<std::size_t>(o.stride, 1) == 0 || step == result.steps)) any = true;
    }
    if (!any) return;
    const ComplexField psi(grid, state);
    const double t = static_cast<double>(step) * spec.dt;
    for (const auto& o : observers) {
      if (o.callback && (step % std::max<std::size_t>(o.stride, 1) == 0 || step == result.steps)) {
        o.callback(step, t, psi);
      }
    }
  };

  auto try_mask = [&](std::size_t step) {
    if (masked) return;
    // Half a cell of slack so a packet centred on the barrier is cut at once.
    if (mean_x(grid, state) < spec.barrier->x - 0.5 * grid.spacing(0)) return;
    MaskResult m = apply_mask(ComplexField(grid, state), *spec.barrier);
    state = std::move(m.psi).release();
    result.transmitted = m.transmitted;
    result.discarded = m.discarded;
    result.mask_step = step;
    masked = true;
    start_particles(step);
  };

  if (masked) start_particles(0);
  try_mask(0);
  notify(0);
  screen.add(state, 0.5 * spec.dt);
  for (std::size_t step = 1; step <= result.steps; ++step) {
    propagator.step_in_place(state);
    if (masked && detector) {
      pilot::GuidanceField next(ComplexField(grid, state), spec.constants);
      detector->advance(*guidance, next, spec.dt);
      guidance = std::move(next);
    }
    try_mask(step);
    notify(step);
    screen.add(state, step == result.steps ? 0.5 * spec.dt : spec.dt);
  }
  if (!masked) throw ValidationError("the packet never reached the barrier; increase the run duration");

  ScreenFlux flux = screen_flux_profile(screen);
  std::vector<double> detections =
      bohm ? detector->ys() : pilot::sample_line(flux.profile, spec.shots, derive_seed(seed, kFlashes), spec.threads);
  ScreenHistogram histogram = bin_detections(detections, screen.line(), spec.bins, to_string(spec.mode));
  return ExperimentResult{
      .flux = std::move(flux),
      .histogram = std::move(histogram),
      .detections = std::move(detections),
      .transmitted = result.transmitted,
      .discarded = result.discarded,
      .mask_step = result.mask_step,
      .steps = result.steps,
      .undetected = bohm ? detector->size() - detector->detected() : 0,
      .absorbed = bohm ? detector->absorbed() : 0,
      .exited = bohm ? detector->exited() : 0,
      .flagged = bohm ? detector->flagged() : 0,
      .final_norm = norm_squared_integral(ComplexField(grid, state)),
      .warnings = std::move(warnings),
  };
}

ModeComparison compare_modes(ApparatusSpec spec, std::uint64_t seed, std::size_t baseline_draws) {
  if (baseline_draws == 0) throw ValidationError("baseline needs at least one draw");
  spec.mode = DetectionMode::Bohm;
  ExperimentResult bohm = run_experiment(spec, seed);
  const std::size_t n = bohm.detections.size();
  if (n == 0) throw TransmissionError("no Bohmian particle reached the screen");
  const RealField& profile = bohm.flux.profile;
  const Grid& line = profile.grid();
  const auto flashes = pilot::sample_line(profile, n, derive_seed(seed, kComparison), spec.threads);
  ScreenHistogram copenhagen = bin_detections(flashes, line, spec.bins, "copenhagen");
  const double tv = pilot::tv_distance(copenhagen.counts, bohm.histogram.counts);
  double baseline = 0.0;
  for (std::size_t r = 0; r < baseline_draws; ++r) {
    const auto a = pilot::sample_line(profile, n, derive_seed(seed, kBaseline, 2 * r), spec.threads);
    const auto b = pilot::sample_line(profile, n, derive_seed(seed, kBaseline, 2 * r + 1), spec.threads);
    baseline += pilot::tv_distance(bin_detections(a, line, spec.bins, "").counts,
                                   bin_detections(b, line, spec.bins, "").counts);
  }
  baseline /= static_cast<double>(baseline_draws);
  return {std::move(bohm), std::move(copenhagen), tv, baseline, tv < 2.0 * baseline};
}

}  // namespace wavelab::gun
