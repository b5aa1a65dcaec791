#include "wavelab/gun/screen.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/calculus.hpp"
#include "wavelab/pilot/histogram.hpp"

namespace wavelab::gun {

ScreenFluxAccumulator::ScreenFluxAccumulator(const Grid& grid, double screen_x, const PhysicalConstants& constants)
    : grid_(grid),
      line_(Grid::line(grid.origin(1), grid.extent(1), grid.ny())),
      hbar_over_m_(constants.hbar / constants.mass),
      flux_(grid.ny(), 0.0) {
  constants.validate();
  if (grid.dims() != 2) throw ValidationError("screen needs a plane grid");
  const double s = (screen_x - grid.origin(0)) / grid.spacing(0);
  if (!(s >= 1.0 && s <= static_cast<double>(grid.nx()) - 3.0)) throw DomainError("screen must be interior");
  column_ = static_cast<std::size_t>(s);
  blend_ = s - static_cast<double>(column_);
}

void ScreenFluxAccumulator::add(const ComplexField& psi, double weight) {
  require_same_grid(grid_, psi.grid(), "ScreenFluxAccumulator::add");
  add(psi.values(), weight);
}

void ScreenFluxAccumulator::add(const std::vector<Complex>& psi, double weight) {
  if (psi.size() != grid_.size()) throw GridError("state size does not match the screen grid");
  const std::size_t nx = grid_.nx();
  const double inv2h = 1.0 / (2.0 * grid_.spacing(0));
  for (std::size_t j = 0; j < grid_.ny(); ++j) {
    double jx[2];
    for (int c = 0; c < 2; ++c) {
      const std::size_t k = j * nx + column_ + static_cast<std::size_t>(c);
      const Complex d = (psi[k + 1] - psi[k - 1]) * inv2h;
      jx[c] = hbar_over_m_ * std::imag(std::conj(psi[k]) * d);
    }
    flux_[j] += weight * ((1.0 - blend_) * jx[0] + blend_ * jx[1]);
  }
}

ScreenFlux screen_flux_profile(const ScreenFluxAccumulator& accumulator) {
  const std::vector<double>& raw = accumulator.raw();
  double positive = 0.0, negative = 0.0;
  for (double v : raw) (v > 0.0 ? positive : negative) += std::abs(v);
  if (!(positive > 0.0)) throw TransmissionError("no flux reached the screen");
  const double negative_fraction = negative / (positive + negative);
  if (negative_fraction > kMaxBackflow) throw BackflowError("negative screen flux above 5%: check the geometry");
  std::vector<double> clipped(raw.size());
  std::transform(raw.begin(), raw.end(), clipped.begin(), [](double v) { return std::max(v, 0.0); });
  RealField field(accumulator.line(), std::move(clipped));
  const double total = integrate(field);
  const double scale = 1.0 / total;
  return {field.map([scale](double v) { return v * scale; }), total, negative_fraction};
}

ScreenHistogram bin_detections(const std::vector<double>& ys, const Grid& line, std::size_t bins,
                               const std::string& mode) {
  const pilot::Binning binning{line.origin(0), line.upper(0), bins};
  std::vector<double> counts = pilot::histogram(ys, binning);
  counts.pop_back();
  ScreenHistogram h;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(binning.lo + static_cast<double>(b) * binning.width());
  h.counts = std::move(counts);
  h.total_shots = ys.size();
  h.mode = mode;
  return h;
}

ScreenHistogram bin_profile(const RealField& profile, std::size_t bins) {
  const Grid& line = profile.grid();
  const pilot::Binning binning{line.origin(0), line.upper(0), bins};
  std::vector<double> weights = pilot::density_bins(profile, binning);
  weights.pop_back();
  ScreenHistogram h;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(binning.lo + static_cast<double>(b) * binning.width());
  h.counts = std::move(weights);
  h.mode = "flux";
  return h;
}

}  // namespace wavelab::gun
