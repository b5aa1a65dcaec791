#pragma once

#include "wavelab/core/calculus.hpp"

namespace wavelab::quantum {

/// Split of the Schrodinger equation after substituting psi = A exp(i S / hbar).
struct SemiclassicalResiduals {
  RealField hj;         ///< dS/dt + (grad S)^2 / 2m + U
  RealField quantum;    ///< -(hbar^2 / 2m) lap A / A
  RealField transport;  ///< m d(A^2)/dt + div(A^2 grad S)
  Mask mask;
  double hj_norm = 0.0;  ///< RMS over the mask
  double quantum_norm = 0.0;
  double transport_norm = 0.0;
  double hj_scale = 0.0;  ///< RMS of (grad S)^2 / 2m, for relative comparisons
};

/// Nodes with A <= threshold * max A are dropped, then two more layers so the
/// stencils stay clear of them. Throws NumericalError if nothing is left.
SemiclassicalResiduals semiclassical_residuals(const RealField& amplitude, const RealField& phase,
                                               const RealField& phase_rate, const RealField& density_rate,
                                               const RealField& potential, const PhysicalConstants& constants,
                                               double threshold = 1e-6);

/// Stationary state of energy E: dS/dt = -E, d(A^2)/dt = 0.
SemiclassicalResiduals semiclassical_residuals(const RealField& amplitude, const RealField& phase,
                                               const RealField& potential, double energy,
                                               const PhysicalConstants& constants, double threshold = 1e-6);

/// Time derivatives from snapshots; the middle one is evaluated.
SemiclassicalResiduals semiclassical_residuals(const TimeTriple<double>& amplitude, const TimeTriple<double>& phase,
                                               const RealField& potential, const PhysicalConstants& constants,
                                               double threshold = 1e-6);

}  // namespace wavelab::quantum
