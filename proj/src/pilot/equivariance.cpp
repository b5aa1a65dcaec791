#include "wavelab/pilot/equivariance.hpp"

#include <cmath>

#include "wavelab/core/calculus.hpp"
#include "wavelab/pilot/ensemble.hpp"
#include "wavelab/pilot/histogram.hpp"
#include "wavelab/pilot/sampling.hpp"

namespace wavelab::pilot {

namespace {

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (a * 1024 + b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

bool EquivarianceReport::holds(double factor) const {
  for (const auto& s : samples) {
    if (!(s.tv < factor * s.baseline)) return false;
  }
  return !samples.empty();
}

EquivarianceReport equivariance_test(const ComplexField& psi0, const RealField& potential,
                                     const quantum::PropagatorConfig& propagator, const EquivarianceConfig& config) {
  const Grid& grid = psi0.grid();
  if (grid.dims() != 1) throw ValidationError("equivariance test runs on a line");
  require_same_grid(grid, potential.grid(), "equivariance_test");
  if (config.count == 0 || config.bins == 0 || config.checkpoints == 0 || config.baseline_draws == 0) {
    throw ValidationError("equivariance test needs particles, bins, checkpoints and baseline draws");
  }
  if (std::abs(norm_squared_integral(psi0) - 1.0) > 1e-6) throw ValidationError("psi0 must be normalized");

  const quantum::Propagator stepper(potential, propagator);
  EnsembleAdvancer advancer(sample_from_density(density(psi0), config.count, config.seed, config.threads),
                            config.threads);
  EquivarianceReport report;

  auto checkpoint = [&](std::size_t step, const ComplexField& psi) {
    const RealField rho = density(psi);
    const Binning binning = central_binning(rho, config.mass, config.bins);
    const std::vector<double> expected = density_bins(rho, binning);
    std::vector<double> xs;
    xs.reserve(advancer.positions().size());
    for (std::size_t n = 0; n < advancer.positions().size(); ++n) {
      if (!advancer.exited()[n]) xs.push_back(advancer.positions()[n].x);
    }
    EquivarianceSample s;
    s.step = step;
    s.time = static_cast<double>(step) * propagator.dt;
    s.tv = xs.empty() ? 1.0 : tv_distance(histogram(xs, binning), expected);
    double baseline = 0.0;
    for (std::size_t r = 0; r < config.baseline_draws; ++r) {
      const auto fresh = sample_line(rho, config.count, derived_seed(config.seed, report.samples.size(), r),
                                     config.threads);
      baseline += tv_distance(histogram(fresh, binning), expected);
    }
    s.baseline = baseline / static_cast<double>(config.baseline_draws);
    s.loss_fraction = static_cast<double>(advancer.exit_count()) / static_cast<double>(config.count);
    report.samples.push_back(s);
  };

  std::vector<Complex> state = psi0.values();
  ComplexField current = psi0;
  GuidanceField previous(current, propagator.constants);
  checkpoint(0, current);
  std::size_t next_checkpoint = 1;
  for (std::size_t step = 1; step <= config.steps; ++step) {
    stepper.step_in_place(state);
    current = ComplexField(grid, state);
    GuidanceField next(current, propagator.constants);
    advancer.advance(previous, next, propagator.dt);
    previous = std::move(next);
    if (step * config.checkpoints >= next_checkpoint * config.steps) {
      checkpoint(step, current);
      ++next_checkpoint;
    }
  }
  report.flagged = advancer.flag_count();
  return report;
}

}  // namespace wavelab::pilot
