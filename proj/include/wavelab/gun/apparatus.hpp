#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::gun {

struct Slit {
  double center = 0.0;
  double width = 1.0;
};

/// Opaque plane at x with openings; the transmission is 1 inside a slit and 0
/// elsewhere, as a function of y only.
struct Barrier {
  double x = 0.0;
  std::vector<Slit> slits;

  double transmission(double y) const;
};

enum class DetectionMode { Copenhagen, Bohm };

std::string to_string(DetectionMode mode);
DetectionMode detection_mode_from_string(const std::string& name);

/// One virtual electron-gun experiment. Lengths are in units where the de
/// Broglie wavelength 2 pi / k0 is 1 for the defaults.
struct ApparatusSpec {
  // domain
  Vec2 origin{0.0, -40.0};
  Vec2 extents{98.0, 80.0};
  std::size_t nx = 2048;
  std::size_t ny = 401;
  // packet
  double sigma = 3.2;
  double k0 = 6.283185307179586;
  Vec2 packet_center{28.0, 0.0};
  // barrier: nullopt means a free beam
  std::optional<Barrier> barrier;
  double screen_x = 92.0;
  // run
  double duration = 12.0;
  double dt = 0.01;
  double absorber_width = 5.0;  ///< length; converted to cells
  double absorber_strength = 30.0;
  DetectionMode mode = DetectionMode::Copenhagen;
  std::size_t shots = 10000;
  std::size_t bins = 200;
  PhysicalConstants constants;
  int threads = 1;

  Grid grid() const;
  std::size_t absorber_cells(int axis) const;
  std::size_t steps() const;
  double wavelength() const;
  /// Barrier-to-screen distance (packet start to screen without a barrier).
  double screen_distance() const;

  /// Throws ValidationError on an inconsistent spec; returns soft warnings.
  std::vector<std::string> validate() const;
};

/// Defaults for experiment 1 (free beam), 2 (single slit of width w) and 3
/// (double slit). `width` and `separation` override the slit geometry when
/// positive.
ApparatusSpec default_apparatus(int experiment, double width = 0.0, double separation = 0.0);

struct MaskResult {
  ComplexField psi;  ///< renormalized
  double transmitted = 1.0;  ///< norm fraction kept
  double discarded = 0.0;
};

/// Multiplies psi by the barrier transmission and renormalizes. Throws
/// TransmissionError when less than 1e-6 of the norm gets through.
MaskResult apply_mask(const ComplexField& psi, const Barrier& barrier);

}  // namespace wavelab::gun
