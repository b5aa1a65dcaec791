#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wavelab/gun/apparatus.hpp"
#include "wavelab/gun/screen.hpp"
#include "wavelab/quantum/propagator.hpp"

namespace wavelab::gun {

struct ExperimentResult {
  ScreenFlux flux;
  ScreenHistogram histogram;       ///< detections of the selected mode
  std::vector<double> detections;  ///< y of each flash or crossing
  double transmitted = 1.0;
  double discarded = 0.0;
  std::size_t mask_step = 0;
  std::size_t steps = 0;
  std::size_t undetected = 0;  ///< Bohm: particles that never reached the screen
  std::size_t absorbed = 0;    ///< Bohm: removed by the absorbing layer (part of undetected)
  std::size_t exited = 0;      ///< Bohm: particles that left the grid first
  std::size_t flagged = 0;     ///< Bohm: particles stuck in a node region
  double final_norm = 0.0;
  std::vector<std::string> warnings;
};

/// Propagates the beam, applies the barrier when the mean x of the packet
/// reaches it, integrates the screen flux and records detections.
///
/// Copenhagen: `shots` flashes drawn from the screen flux profile.
/// Bohm: `shots` particles drawn from |psi|^2 right after the barrier (at
/// t = 0 without one), each detected at its first crossing of the screen.
/// Particles in the absorbing layer are removed at the rate 2 W / hbar at
/// which it drains |psi|^2.
/// Observers see psi after each step.
ExperimentResult run_experiment(const ApparatusSpec& spec, std::uint64_t seed,
                                std::span<const quantum::Observer> observers = {});

struct ModeComparison {
  ExperimentResult bohm;
  ScreenHistogram copenhagen;
  double tv = 0.0;
  double baseline = 0.0;  ///< mean TV between two independent flash samples of the same size
  bool agrees = false;    ///< tv < 2 baseline
};

/// One Bohm run; the Copenhagen flashes come from that run's flux profile,
/// as many as there were Bohmian detections.
ModeComparison compare_modes(ApparatusSpec spec, std::uint64_t seed, std::size_t baseline_draws = 8);

/// Deterministic child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index = 0);

}  // namespace wavelab::gun
