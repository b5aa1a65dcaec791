#pragma once

#include <span>
#include <vector>

#include "wavelab/core/calculus.hpp"
#include "wavelab/quantum/propagator.hpp"

namespace wavelab::quantum {

/// One component per axis.
using CurrentField = std::vector<RealField>;

/// J = (hbar / m) Im(psi* grad psi), so that d|psi|^2/dt = -div J.
CurrentField probability_current(const ComplexField& psi, const PhysicalConstants& constants);

struct ContinuityResidual {
  RealField field;  ///< d|psi|^2/dt + div J at the middle snapshot
  double max_abs = 0.0;
  double rms = 0.0;  ///< over interior nodes
};

ContinuityResidual continuity_residual(const TimeTriple<Complex>& psi, const PhysicalConstants& constants);

struct NormReport {
  std::size_t samples = 0;
  double initial_norm = 0.0;
  double final_norm = 0.0;
  double max_drift = 0.0;  ///< max |norm - initial|
  double absorbed_fraction = 0.0;
  bool monotone = true;  ///< never increases by more than round-off
};

NormReport norm_history_check(std::span<const NormSample> history);

}  // namespace wavelab::quantum
