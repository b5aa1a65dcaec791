#include "wavelab/pilot/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/calculus.hpp"

namespace wavelab::pilot {

std::size_t Binning::index(double x) const {
  if (!(x >= lo) || !(x < hi)) return bins;
  return std::min(static_cast<std::size_t>((x - lo) / width()), bins - 1);
}

void Binning::validate() const {
  if (bins == 0 || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("binning needs at least one bin and lo < hi");
  }
}

std::vector<double> histogram(std::span<const double> samples, const Binning& binning) {
  binning.validate();
  std::vector<double> counts(binning.bins + 1, 0.0);
  for (double x : samples) counts[binning.index(x)] += 1.0;
  return counts;
}

namespace {

// Integral of the piecewise-linear interpolant of rho from the origin to x.
double cumulative(const RealField& rho, double x) {
  const Grid& g = rho.grid();
  const double h = g.spacing(0);
  const double s = std::clamp((x - g.origin(0)) / h, 0.0, static_cast<double>(g.nx() - 1));
  const std::size_t full = std::min(static_cast<std::size_t>(s), g.nx() - 1);
  std::vector<double> pieces;
  pieces.reserve(full + 1);
  for (std::size_t i = 0; i < full; ++i) pieces.push_back(0.5 * h * (rho[i] + rho[i + 1]));
  if (full + 1 < g.nx()) {
    const double t = s - static_cast<double>(full);
    const double end = (1.0 - t) * rho[full] + t * rho[full + 1];
    pieces.push_back(0.5 * t * h * (rho[full] + end));
  }
  return compensated_sum(pieces);
}

}  // namespace

std::vector<double> density_bins(const RealField& rho, const Binning& binning) {
  binning.validate();
  if (rho.grid().dims() != 1) throw ValidationError("density_bins needs a line density");
  std::vector<double> out(binning.bins + 1, 0.0);
  const double total = integrate(rho);
  double previous = cumulative(rho, binning.lo);
  double inside = 0.0;
  for (std::size_t b = 0; b < binning.bins; ++b) {
    const double next = cumulative(rho, binning.lo + static_cast<double>(b + 1) * binning.width());
    out[b] = next - previous;
    inside += out[b];
    previous = next;
  }
  out[binning.bins] = std::max(0.0, total - inside);
  return out;
}

Binning central_binning(const RealField& rho, double mass, std::size_t bins) {
  if (rho.grid().dims() != 1) throw ValidationError("central_binning needs a line density");
  if (!(mass > 0.0 && mass <= 1.0)) throw ValidationError("mass fraction must lie in (0, 1]");
  const Grid& g = rho.grid();
  const double total = integrate(rho);
  if (!(total > 0.0)) throw ValidationError("density integrates to zero");
  const double tail = 0.5 * (1.0 - mass) * total;
  const double h = g.spacing(0);
  // Node-resolution search is enough for choosing histogram ranges.
  double acc = 0.0;
  std::size_t lo = 0;
  while (lo + 1 < g.nx() && acc + 0.5 * h * (rho[lo] + rho[lo + 1]) <= tail) {
    acc += 0.5 * h * (rho[lo] + rho[lo + 1]);
    ++lo;
  }
  acc = 0.0;
  std::size_t hi = g.nx() - 1;
  while (hi > lo + 1 && acc + 0.5 * h * (rho[hi] + rho[hi - 1]) <= tail) {
    acc += 0.5 * h * (rho[hi] + rho[hi - 1]);
    --hi;
  }
  return {g.coord(0, lo), g.coord(0, hi), bins};
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty()) throw ValidationError("tv_distance needs equal, non-empty histograms");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) throw ValidationError("histogram weights must be non-negative");
    sp += p[i];
    sq += q[i];
  }
  if (!(sp > 0.0) || !(sq > 0.0)) throw ValidationError("histogram is empty");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] / sp - q[i] / sq);
  return 0.5 * d;
}

}  // namespace wavelab::pilot
