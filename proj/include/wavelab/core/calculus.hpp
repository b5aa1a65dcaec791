#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab {

// Finite differences: central in the interior, second-order one-sided at the
// boundaries. Every operator here is second-order accurate.

RealField partial(const RealField& f, int axis);
ComplexField partial(const ComplexField& f, int axis);

std::vector<RealField> gradient(const RealField& f);
std::vector<ComplexField> gradient(const ComplexField& f);

RealField laplacian(const RealField& f);
ComplexField laplacian(const ComplexField& f);

RealField divergence(std::span<const RealField> components);

/// Pointwise |grad f|^2.
RealField gradient_squared(const RealField& f);

/// Central difference in time from a snapshot triple, evaluated at the middle.
RealField time_derivative(const TimeTriple<double>& s);
ComplexField second_time_derivative(const TimeTriple<Complex>& s);

/// Trapezoidal quadrature with compensated summation.
double integrate(const RealField& f);
double norm_squared_integral(const ComplexField& psi);
RealField density(const ComplexField& psi);

/// Throws NormalizationError for a zero field.
ComplexField normalize(const ComplexField& psi);

/// N exp(-|r - c|^2 / (4 sigma^2)) exp(i k0 . r), normalized.
///
/// Requires sigma >= 3 spacing on every axis and |psi| at the domain boundary
/// below 1e-8 of the peak; otherwise DomainError.
ComplexField gaussian_packet(const Grid& grid, Vec2 center, double sigma, Vec2 k0);

/// psi = A exp(i S / hbar).
ComplexField amplitude_phase_compose(const RealField& amplitude, const RealField& phase, double hbar);

struct AmplitudePhase {
  RealField amplitude;
  RealField phase;  ///< S, continuous across unmasked neighbours; 0 on masked nodes.
  Mask mask;        ///< 1 where |psi| exceeds the threshold.
};

/// Inverse of amplitude_phase_compose. S is unwrapped by a breadth-first flood
/// from the maximum-amplitude node, visiting neighbours in row-major order.
AmplitudePhase amplitude_phase_decompose(const ComplexField& psi, double hbar, double threshold = 1e-12);

/// Linear (1D) or bilinear (2D) interpolation; the point is clamped to the grid.
double interpolate(const RealField& f, Vec2 p);
Complex interpolate(const ComplexField& f, Vec2 p);

/// Removes `layers` rings of nodes next to masked nodes or the grid boundary.
Mask erode(const Grid& grid, const Mask& mask, int layers);
Mask full_mask(const Grid& grid);

struct ResidualStats {
  double max_abs = 0.0;
  double rms = 0.0;
  double masked_fraction = 0.0;
  std::size_t evaluated = 0;
};

ResidualStats residual_stats(const RealField& residual, const Mask& mask);

/// Sum with Neumaier compensation; the order is fixed, so the result is deterministic.
double compensated_sum(std::span<const double> values);

}  // namespace wavelab
