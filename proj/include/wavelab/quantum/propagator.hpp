#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wavelab/core/field.hpp"
#include "wavelab/quantum/tridiagonal.hpp"

namespace wavelab::quantum {

enum class Scheme { CrankNicolson1D, ADI2D };

/// Cosine-ramp imaginary potential -i W along every grid edge:
/// W = strength (1 - cos(pi s)) / 2 with s = 1 at the wall and 0 at the
/// inner edge of the layer.
struct AbsorbingLayer {
  std::size_t width = 0;  ///< cells, >= 8
  double strength = 0.0;
  std::size_t width_y = 0;  ///< cells along y on a plane; 0 = same as width

  std::size_t cells(int axis) const { return axis == 1 && width_y > 0 ? width_y : width; }
};

struct PropagatorConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::CrankNicolson1D;
  std::optional<AbsorbingLayer> absorber;  ///< nullopt: reflecting (Dirichlet) walls only
  PhysicalConstants constants;
  int threads = 1;

  void validate(const Grid& grid) const;
};

enum class TimeDirection { Forward, Backward };

/// Crank-Nicolson propagator for i hbar dpsi/dt = -(hbar^2 / 2m) lap psi + U psi.
///
/// Lines use one tridiagonal solve per step. Planes use Peaceman-Rachford
/// ADI: an x-implicit half step followed by a y-implicit half step, each
/// carrying half of the potential. Edge nodes are held at zero. All
/// eliminations are factored once at construction.
class Propagator {
 public:
  Propagator(const RealField& potential, PropagatorConfig config,
             TimeDirection direction = TimeDirection::Forward);

  const Grid& grid() const noexcept { return grid_; }
  const PropagatorConfig& config() const noexcept { return config_; }

  ComplexField step(const ComplexField& psi) const;

  /// Advances flat values in place; `psi` must match the grid size. Not safe
  /// to call concurrently on one Propagator (shares scratch storage).
  void step_in_place(std::vector<Complex>& psi) const;

  /// W(r) of the absorbing layer (zero without one).
  RealField absorber_profile() const;

 private:
  void step_line(std::vector<Complex>& psi) const;
  void step_plane(std::vector<Complex>& psi) const;

  Grid grid_;
  PropagatorConfig config_;
  double sign_;
  std::vector<Complex> potential_;  // U - i W
  // x: explicit coefficient and per-node elimination; y likewise.
  Complex off_x_{};
  Complex off_y_{};
  std::vector<Complex> ratio_x_, inv_x_, ratio_y_, inv_y_;
  mutable std::vector<Complex> scratch_;
};

/// One step with a freshly built propagator.
ComplexField step(const ComplexField& psi, const RealField& potential, const PropagatorConfig& config);

struct NormSample {
  std::size_t step = 0;
  double time = 0.0;
  double norm = 0.0;
};

/// Read-only callback invoked at steps 0, stride, 2 stride, ... and at the end.
struct Observer {
  std::size_t stride = 1;
  std::function<void(std::size_t step, double time, const ComplexField& psi)> callback;
};

struct PropagationResult {
  ComplexField final_state;
  std::vector<NormSample> norm_history;
};

PropagationResult propagate(const ComplexField& psi0, const RealField& potential, const PropagatorConfig& config,
                            std::size_t n_steps, std::span<const Observer> observers = {},
                            std::size_t norm_stride = 1);

}  // namespace wavelab::quantum
