#include "wavelab/quantum/semiclassical.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab::quantum {

SemiclassicalResiduals semiclassical_residuals(const RealField& amplitude, const RealField& phase,
                                               const RealField& phase_rate, const RealField& density_rate,
                                               const RealField& potential, const PhysicalConstants& constants,
                                               double threshold) {
  constants.validate();
  const Grid& grid = amplitude.grid();
  require_same_grid(grid, phase.grid(), "semiclassical_residuals");
  require_same_grid(grid, phase_rate.grid(), "semiclassical_residuals");
  require_same_grid(grid, density_rate.grid(), "semiclassical_residuals");
  require_same_grid(grid, potential.grid(), "semiclassical_residuals");
  const double hbar = constants.hbar;
  const double m = constants.mass;

  double peak = 0.0;
  for (double a : amplitude.values()) peak = std::max(peak, a);
  Mask mask(grid.size(), 0);
  for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = amplitude[k] > threshold * peak ? 1 : 0;
  mask = erode(grid, mask, 2);

  const RealField grad2 = gradient_squared(phase);
  const RealField lap_a = laplacian(amplitude);
  const std::vector<RealField> grad_s = gradient(phase);
  std::vector<RealField> flux;
  for (const RealField& g : grad_s) {
    std::vector<double> f(grid.size());
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = amplitude[k] * amplitude[k] * g[k];
    flux.emplace_back(grid, std::move(f));
  }
  const RealField div = divergence(flux);

  std::vector<double> hj(grid.size(), 0.0), qu(grid.size(), 0.0), tr(grid.size(), 0.0), kin(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!mask[k]) continue;
    kin[k] = grad2[k] / (2.0 * m);
    hj[k] = phase_rate[k] + kin[k] + potential[k];
    qu[k] = -(hbar * hbar / (2.0 * m)) * lap_a[k] / amplitude[k];
    tr[k] = m * density_rate[k] + div[k];
  }
  SemiclassicalResiduals out{RealField(grid, std::move(hj)), RealField(grid, std::move(qu)),
                             RealField(grid, std::move(tr)), mask};
  const ResidualStats s_hj = residual_stats(out.hj, mask);
  if (s_hj.evaluated == 0) throw NumericalError("amplitude below threshold on every node");
  out.hj_norm = s_hj.rms;
  out.quantum_norm = residual_stats(out.quantum, mask).rms;
  out.transport_norm = residual_stats(out.transport, mask).rms;
  out.hj_scale = residual_stats(RealField(grid, std::move(kin)), mask).rms;
  return out;
}

SemiclassicalResiduals semiclassical_residuals(const RealField& amplitude, const RealField& phase,
                                               const RealField& potential, double energy,
                                               const PhysicalConstants& constants, double threshold) {
  const Grid& grid = amplitude.grid();
  return semiclassical_residuals(amplitude, phase, RealField(grid, std::vector<double>(grid.size(), -energy)),
                                 RealField(grid, std::vector<double>(grid.size(), 0.0)), potential, constants,
                                 threshold);
}

SemiclassicalResiduals semiclassical_residuals(const TimeTriple<double>& amplitude, const TimeTriple<double>& phase,
                                               const RealField& potential, const PhysicalConstants& constants,
                                               double threshold) {
  if (amplitude.dt != phase.dt) throw ValidationError("amplitude and phase snapshots use different dt");
  auto squared = [](const RealField& a) { return a.map([](double v) { return v * v; }); };
  const TimeTriple<double> rho{squared(amplitude.previous), squared(amplitude.current), squared(amplitude.next),
                               amplitude.dt};
  return semiclassical_residuals(amplitude.current, phase.current, time_derivative(phase), time_derivative(rho),
                                 potential, constants, threshold);
}

}  // namespace wavelab::quantum
