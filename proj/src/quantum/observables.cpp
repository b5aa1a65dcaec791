#include "wavelab/quantum/observables.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab::quantum {

CurrentField probability_current(const ComplexField& psi, const PhysicalConstants& constants) {
  constants.validate();
  const double scale = constants.hbar / constants.mass;
  CurrentField current;
  for (int axis = 0; axis < psi.grid().dims(); ++axis) {
    const ComplexField d = partial(psi, axis);
    std::vector<double> j(psi.size());
    for (std::size_t k = 0; k < j.size(); ++k) j[k] = scale * std::imag(std::conj(psi[k]) * d[k]);
    current.emplace_back(psi.grid(), std::move(j));
  }
  return current;
}

ContinuityResidual continuity_residual(const TimeTriple<Complex>& psi, const PhysicalConstants& constants) {
  const TimeTriple<double> rho{density(psi.previous), density(psi.current), density(psi.next), psi.dt};
  const RealField drho = time_derivative(rho);
  const CurrentField j = probability_current(psi.current, constants);
  const RealField div = divergence(j);
  std::vector<double> r(drho.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = drho[k] + div[k];
  RealField field(drho.grid(), std::move(r));
  const ResidualStats stats = residual_stats(field, erode(field.grid(), full_mask(field.grid()), 1));
  return {std::move(field), stats.max_abs, stats.rms};
}

NormReport norm_history_check(std::span<const NormSample> history) {
  NormReport report;
  report.samples = history.size();
  if (history.empty()) return report;
  report.initial_norm = history.front().norm;
  report.final_norm = history.back().norm;
  const double slack = 1e-12 * std::max(1.0, report.initial_norm);
  for (std::size_t i = 0; i < history.size(); ++i) {
    report.max_drift = std::max(report.max_drift, std::abs(history[i].norm - report.initial_norm));
    if (i > 0 && history[i].norm > history[i - 1].norm + slack) report.monotone = false;
  }
  if (report.initial_norm > 0.0) {
    report.absorbed_fraction = std::max(0.0, 1.0 - report.final_norm / report.initial_norm);
  }
  return report;
}

}  // namespace wavelab::quantum
