#pragma once

#include <span>
#include <vector>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/field.hpp"
#include "wavelab/optics/index_field.hpp"

namespace wavelab::optics {

/// A derived field with nodes where it is undefined masked out (value 0).
struct MaskedField {
  RealField values;
  Mask mask;

  double masked_fraction() const;
};

/// |grad S| below this is a singular phase (caustic or flat phase).
inline constexpr double kSingularGradient = 1e-12;

/// omega / |grad S|; singular nodes are masked.
MaskedField phase_velocity(const RealField& phase, double omega);

/// dS/dt / |grad S|, signed as written (negative for a wave moving toward +grad S
/// with S = k.r - omega t).
MaskedField phase_velocity_td(const RealField& phase_rate, const RealField& phase);

/// 2 pi / |grad S|.
MaskedField local_wavelength(const RealField& phase);

/// (grad S)^2 - n^2 omega^2 / c^2.
RealField eikonal_residual(const RealField& phase, const IndexField& n, double omega, double c);

/// (grad S)^2 - (n^2 / c^2) (dS/dt)^2 at the middle snapshot.
RealField eikonal_residual_time_dependent(const TimeTriple<double>& phase, const IndexField& n, double c);

/// |lap F - (n^2 / c^2) d2F/dt2| at the middle snapshot.
RealField wave_equation_residual(const TimeTriple<Complex>& wave, const IndexField& n, double c);

/// RMS magnitudes of the four bracketed terms of lap(A e^{iS}) with S = S~/eps.
struct PhaseScalingRow {
  double epsilon = 0.0;
  double amplitude_laplacian = 0.0;  ///< lap A
  double cross_term = 0.0;           ///< 2 eps^-1 grad A . grad S~
  double gradient_squared = 0.0;     ///< A eps^-2 (grad S~)^2
  double phase_laplacian = 0.0;      ///< A eps^-1 lap S~
  int dominant = 0;                  ///< index 0..3 of the largest term
};

std::vector<PhaseScalingRow> large_phase_scaling(const RealField& amplitude, const RealField& phase_tilde,
                                                 std::span<const double> epsilons);

}  // namespace wavelab::optics
