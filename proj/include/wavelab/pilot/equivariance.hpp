#pragma once

#include <cstdint>
#include <vector>

#include "wavelab/quantum/propagator.hpp"

namespace wavelab::pilot {

struct EquivarianceConfig {
  std::size_t count = 100000;
  std::size_t bins = 50;
  std::size_t steps = 1000;
  std::size_t checkpoints = 5;  ///< evenly spaced, plus t = 0
  std::uint64_t seed = 1;
  std::size_t baseline_draws = 8;  ///< fresh samples averaged into the baseline
  double mass = 0.9999;            ///< bins span the central interval holding this mass
  int threads = 1;
};

struct EquivarianceSample {
  std::size_t step = 0;
  double time = 0.0;
  double tv = 0.0;        ///< ensemble histogram vs binned |psi|^2
  double baseline = 0.0;  ///< fresh same-size sample vs binned |psi|^2
  double loss_fraction = 0.0;
};

struct EquivarianceReport {
  std::vector<EquivarianceSample> samples;
  std::size_t flagged = 0;

  /// tv < factor * baseline at every checkpoint.
  bool holds(double factor = 2.0) const;
};

/// Samples particles from |psi0|^2, then evolves the wave (Crank-Nicolson) and
/// the particles (guidance) together on a line, comparing the binned ensemble
/// with the binned density at each checkpoint.
EquivarianceReport equivariance_test(const ComplexField& psi0, const RealField& potential,
                                     const quantum::PropagatorConfig& propagator, const EquivarianceConfig& config);

}  // namespace wavelab::pilot
