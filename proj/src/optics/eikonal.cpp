#include "wavelab/optics/eikonal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace wavelab::optics {

namespace {

template <class F>
MaskedField over_gradient(const RealField& phase, F&& value_at) {
  const RealField g2 = gradient_squared(phase);
  std::vector<double> out(phase.size(), 0.0);
  Mask mask(phase.size(), 0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double magnitude = std::sqrt(g2[k]);
    if (magnitude > kSingularGradient) {
      out[k] = value_at(k, magnitude);
      mask[k] = 1;
    }
  }
  return {RealField(phase.grid(), std::move(out)), std::move(mask)};
}

double rms(const std::vector<double>& v) {
  std::vector<double> sq(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) sq[k] = v[k] * v[k];
  return std::sqrt(compensated_sum(sq) / static_cast<double>(v.size()));
}

}  // namespace

double MaskedField::masked_fraction() const {
  const auto kept = std::count(mask.begin(), mask.end(), std::uint8_t{1});
  return 1.0 - static_cast<double>(kept) / static_cast<double>(mask.size());
}

MaskedField phase_velocity(const RealField& phase, double omega) {
  return over_gradient(phase, [omega](std::size_t, double g) { return omega / g; });
}

MaskedField phase_velocity_td(const RealField& phase_rate, const RealField& phase) {
  require_same_grid(phase_rate.grid(), phase.grid(), "phase_velocity_td");
  return over_gradient(phase, [&](std::size_t k, double g) { return phase_rate[k] / g; });
}

MaskedField local_wavelength(const RealField& phase) {
  return over_gradient(phase, [](std::size_t, double g) { return 2.0 * std::numbers::pi / g; });
}

RealField eikonal_residual(const RealField& phase, const IndexField& n, double omega, double c) {
  require_same_grid(phase.grid(), n.grid(), "eikonal_residual");
  const RealField g2 = gradient_squared(phase);
  const double scale = omega * omega / (c * c);
  std::vector<double> out(phase.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double nk = n.field()[k];
    out[k] = g2[k] - nk * nk * scale;
  }
  return RealField(phase.grid(), std::move(out));
}

RealField eikonal_residual_time_dependent(const TimeTriple<double>& phase, const IndexField& n, double c) {
  require_same_grid(phase.current.grid(), n.grid(), "eikonal_residual_time_dependent");
  const RealField rate = time_derivative(phase);
  const RealField g2 = gradient_squared(phase.current);
  std::vector<double> out(g2.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double nk = n.field()[k];
    out[k] = g2[k] - (nk * nk) / (c * c) * rate[k] * rate[k];
  }
  return RealField(g2.grid(), std::move(out));
}

RealField wave_equation_residual(const TimeTriple<Complex>& wave, const IndexField& n, double c) {
  require_same_grid(wave.current.grid(), n.grid(), "wave_equation_residual");
  const ComplexField lap = laplacian(wave.current);
  const ComplexField ftt = second_time_derivative(wave);
  std::vector<double> out(lap.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double nk = n.field()[k];
    out[k] = std::abs(lap[k] - (nk * nk) / (c * c) * ftt[k]);
  }
  return RealField(lap.grid(), std::move(out));
}

std::vector<PhaseScalingRow> large_phase_scaling(const RealField& amplitude, const RealField& phase_tilde,
                                                 std::span<const double> epsilons) {
  require_same_grid(amplitude.grid(), phase_tilde.grid(), "large_phase_scaling");
  const std::size_t n = amplitude.size();
  const RealField lap_a = laplacian(amplitude);
  const auto grad_a = gradient(amplitude);

  std::vector<PhaseScalingRow> rows;
  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw ValidationError("epsilon must be positive");
    const RealField phase = phase_tilde.map([eps](double s) { return s / eps; });
    const auto grad_s = gradient(phase);
    const RealField lap_s = laplacian(phase);
    std::vector<double> cross(n, 0.0);
    std::vector<double> a_g2(n, 0.0);
    std::vector<double> a_lap(n);
    for (std::size_t axis = 0; axis < grad_s.size(); ++axis) {
      for (std::size_t k = 0; k < n; ++k) {
        cross[k] += 2.0 * grad_a[axis][k] * grad_s[axis][k];
        a_g2[k] += amplitude[k] * grad_s[axis][k] * grad_s[axis][k];
      }
    }
    for (std::size_t k = 0; k < n; ++k) a_lap[k] = amplitude[k] * lap_s[k];

    PhaseScalingRow row;
    row.epsilon = eps;
    row.amplitude_laplacian = rms(lap_a.values());
    row.cross_term = rms(cross);
    row.gradient_squared = rms(a_g2);
    row.phase_laplacian = rms(a_lap);
    const std::array<double, 4> terms{row.amplitude_laplacian, row.cross_term, row.gradient_squared,
                                      row.phase_laplacian};
    row.dominant = static_cast<int>(std::max_element(terms.begin(), terms.end()) - terms.begin());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wavelab::optics
