#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wavelab/pilot/guidance.hpp"
#include "wavelab/pilot/sampling.hpp"

namespace wavelab::pilot {

/// Below this fraction of max |psi|^2 a step is split into kNodeSubsteps.
inline constexpr double kRefineThreshold = 1e-10;
inline constexpr int kNodeSubsteps = 16;

/// Carries an ensemble through a sequence of wave snapshots.
///
/// Between two snapshots the velocity is interpolated linearly in time and
/// each particle takes one RK4 step. Near nodes of psi, or where the stage
/// velocities vary fast enough that neighbours could swap order, the step is
/// split into kNodeSubsteps, and each of those once more if needed.
/// Particles leaving the grid are marked exited and never move again;
/// particles that still meet a node region after refinement are flagged and
/// held for that step.
class EnsembleAdvancer {
 public:
  explicit EnsembleAdvancer(ParticleEnsemble ensemble, int threads = 1);

  void advance(const GuidanceField& from, const GuidanceField& to, double dt);

  const ParticleEnsemble& ensemble() const noexcept { return ensemble_; }
  const std::vector<Vec2>& positions() const noexcept { return ensemble_.positions; }
  const std::vector<std::uint8_t>& exited() const noexcept { return exited_; }
  const std::vector<std::uint8_t>& flagged() const noexcept { return flagged_; }
  double time() const noexcept { return time_; }
  std::size_t exit_count() const;
  std::size_t flag_count() const;
  std::size_t refined_steps() const noexcept { return refined_; }

  /// Exits the particle by hand (for example at an absorbing barrier).
  void remove(std::size_t particle);

 private:
  ParticleEnsemble ensemble_;
  std::vector<std::uint8_t> exited_;
  std::vector<std::uint8_t> flagged_;
  std::vector<std::uint8_t> refined_flag_;
  int threads_;
  double time_;
  std::size_t refined_ = 0;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<std::vector<Vec2>> positions;  ///< [snapshot][particle]
  std::vector<std::uint8_t> exited;
  std::vector<std::uint8_t> flagged;
  std::size_t exit_count = 0;
  std::size_t flag_count = 0;

  double loss_fraction() const;
  /// Final positions of particles that stayed on the grid.
  std::vector<Vec2> survivors() const;
};

/// Snapshots are psi at birth_time + k dt.
TrajectoryRecord advance_ensemble(const ParticleEnsemble& ensemble, std::span<const ComplexField> stream, double dt,
                                  const PhysicalConstants& constants, int threads = 1);

}  // namespace wavelab::pilot
