#pragma once

#include <span>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::gun {

struct Peak {
  double position = 0.0;
  double value = 0.0;
};

/// Local maxima of a line profile above `min_relative` of its maximum, with
/// parabolic refinement, sorted by position.
std::vector<Peak> local_maxima(const RealField& profile, double min_relative = 0.02);

/// Mean distance between the `count` maxima nearest to `center`.
double fringe_spacing(const RealField& profile, double center = 0.0, std::size_t count = 5);

/// Smallest (I_max - I_min) / (I_max + I_min) over the three central fringes,
/// pairing each dip with the mean of the two maxima around it.
double fringe_visibility(const RealField& profile, double center = 0.0);

/// Full width at half maximum of the highest lobe.
double fwhm(const RealField& profile);

/// Flux-weighted mean position.
double profile_mean(const RealField& profile);

/// int |P(y) - P(2c - y)| dy / int P dy.
double mirror_asymmetry(const RealField& profile, double center = 0.0);

/// Far-field dark fringes of two slits separated by d: y = (m + 1/2) lambda L / d.
/// Returns the `count` closest to the axis (pairs of +/- positions).
std::vector<double> double_slit_minima(double wavelength, double distance, double separation, std::size_t count = 4);

/// Whether the screen is far enough for far-field formulas: L >= d^2 / lambda.
bool fraunhofer_regime(double wavelength, double distance, double aperture);

/// Share of samples within +/- half_width of any window centre.
double fraction_in_windows(std::span<const double> samples, std::span<const double> centres, double half_width);

}  // namespace wavelab::gun
