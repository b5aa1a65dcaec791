#pragma once

#include <functional>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::pilot {

/// Node velocities at time t, one field per axis.
using VelocityProvider = std::function<std::vector<RealField>(double t)>;

struct ContinuityOracleConfig {
  double t0 = 0.0;
  double dt = 1e-3;
  std::size_t steps = 0;
  bool periodic = false;
  double max_cfl = 0.9;
};

/// Donor-cell finite-volume update of d rho/dt + div(rho v) = 0. Every node
/// owns a cell; face velocities are averages of the two neighbouring nodes,
/// taken at the middle of each step. Closed walls carry no flux; with
/// `periodic` the nodes form a ring. Mass (cell volume times rho) is conserved
/// to round-off. Throws CflError when max |v| dt / h exceeds max_cfl.
RealField continuity_oracle(const RealField& rho0, const VelocityProvider& velocity,
                            const ContinuityOracleConfig& config);

/// Cell-volume weighted total, matching the oracle's conserved quantity.
double oracle_mass(const RealField& rho, bool periodic);

}  // namespace wavelab::pilot
