#pragma once

#include <span>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::pilot {

/// Equal-width bins on [lo, hi).
struct Binning {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 1;

  double width() const { return (hi - lo) / static_cast<double>(bins); }
  double center(std::size_t b) const { return lo + (static_cast<double>(b) + 0.5) * width(); }
  /// Bin of x, or `bins` when x is outside.
  std::size_t index(double x) const;
  void validate() const;
};

/// Counts per bin plus one trailing entry for samples outside the range.
std::vector<double> histogram(std::span<const double> samples, const Binning& binning);

/// Probability per bin of a line density (linear between nodes), plus the
/// mass outside the range as the trailing entry.
std::vector<double> density_bins(const RealField& rho, const Binning& binning);

/// Smallest interval holding `mass` of the density, cut symmetrically in the tails.
Binning central_binning(const RealField& rho, double mass, std::size_t bins);

/// Half the L1 distance after normalizing both to unit sum.
double tv_distance(std::span<const double> p, std::span<const double> q);

}  // namespace wavelab::pilot
