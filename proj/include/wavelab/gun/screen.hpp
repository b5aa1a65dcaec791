#pragma once

#include <string>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::gun {

/// Above this share of negative flux the screen sees back-flow.
inline constexpr double kMaxBackflow = 0.05;

/// Time integral of J_x through the screen column, P(y) = int J_x(x_s, y, t) dt.
///
/// J_x at the screen is interpolated linearly between the two node columns
/// that bracket x_s. Samples are combined with trapezoid weights in time.
class ScreenFluxAccumulator {
 public:
  ScreenFluxAccumulator(const Grid& grid, double screen_x, const PhysicalConstants& constants);

  /// Adds J_x(t) times `weight`.
  void add(const ComplexField& psi, double weight);
  void add(const std::vector<Complex>& psi, double weight);

  const Grid& line() const noexcept { return line_; }
  const std::vector<double>& raw() const noexcept { return flux_; }

 private:
  Grid grid_;
  Grid line_;
  std::size_t column_;
  double blend_;
  double hbar_over_m_;
  std::vector<double> flux_;
};

struct ScreenFlux {
  RealField profile;  ///< clipped at zero, unit integral over y
  double total = 0.0;  ///< int P(y) dy before normalizing
  double negative_fraction = 0.0;
};

/// Throws BackflowError above kMaxBackflow and TransmissionError when nothing arrived.
ScreenFlux screen_flux_profile(const ScreenFluxAccumulator& accumulator);

/// Binned detection record along the screen.
struct ScreenHistogram {
  std::vector<double> edges;   ///< bins + 1 entries
  std::vector<double> counts;  ///< shots per bin (flash/Bohm) or flux weight
  std::size_t total_shots = 0;
  std::string mode;

  std::size_t bins() const { return counts.size(); }
  double center(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }
};

/// Equal-width bins over the whole screen line; samples outside are dropped.
ScreenHistogram bin_detections(const std::vector<double>& ys, const Grid& line, std::size_t bins,
                               const std::string& mode);

/// Flux weight per bin, same bins as bin_detections.
ScreenHistogram bin_profile(const RealField& profile, std::size_t bins);

}  // namespace wavelab::gun
