#pragma once

#include <cstdint>
#include <vector>

#include "wavelab/core/field.hpp"
#include "wavelab/core/vec2.hpp"

namespace wavelab::pilot {

struct ParticleEnsemble {
  std::vector<Vec2> positions;
  std::uint64_t seed = 0;
  double birth_time = 0.0;
  int dims = 1;
};

/// Inverse-CDF sampling of the piecewise-linear (bilinear on a plane)
/// interpolant of a non-negative density. On a plane y comes from the
/// marginal first, then x from the blend of the two neighbouring rows. Particle i draws from RandomStream(seed, i), so the result does
/// not depend on the thread count.
ParticleEnsemble sample_from_density(const RealField& rho, std::size_t count, std::uint64_t seed,
                                     int threads = 1);

/// Draws `count` values from a density on a line, same scheme as above.
std::vector<double> sample_line(const RealField& rho, std::size_t count, std::uint64_t seed, int threads = 1);

}  // namespace wavelab::pilot
