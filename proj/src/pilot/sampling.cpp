#include "wavelab/pilot/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/parallel.hpp"
#include "wavelab/core/rng.hpp"

namespace wavelab::pilot {

namespace {

// Inverse CDF of the piecewise-linear interpolant through the node values.
struct LinearTable {
  std::vector<double> values;
  std::vector<double> cdf;  // cumulative over intervals, last entry = total
  double origin;
  double spacing;

  double total() const { return cdf.empty() ? 0.0 : cdf.back(); }

  std::size_t interval(double target) const {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    while (i > 0 && cdf[i] == cdf[i - 1]) --i;  // skip empty intervals
    while (i + 1 < cdf.size() && cdf[i] == (i == 0 ? 0.0 : cdf[i - 1])) ++i;
    return i;
  }

  // Fraction across interval i that holds the given cumulative target.
  double fraction(std::size_t i, double target) const {
    const double before = i == 0 ? 0.0 : cdf[i - 1];
    const double r = std::max(0.0, target - before) / spacing;
    const double a = 0.5 * (values[i + 1] - values[i]);
    const double b = values[i];
    const double disc = std::max(0.0, b * b + 4.0 * a * r);
    const double denom = b + std::sqrt(disc);
    const double s = denom > 0.0 ? 2.0 * r / denom : 0.0;
    return std::clamp(s, 0.0, 1.0);
  }

  double locate(double target) const {
    if (cdf.empty()) return origin;
    const std::size_t i = interval(target);
    return origin + (static_cast<double>(i) + fraction(i, target)) * spacing;
  }
};

LinearTable build_table(std::span<const double> weights, double origin, double spacing) {
  LinearTable t{std::vector<double>(weights.begin(), weights.end()), {}, origin, spacing};
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += 0.5 * (weights[i] + weights[i + 1]) * spacing;
    t.cdf.push_back(acc);
  }
  return t;
}

void check_density(const RealField& rho) {
  for (double v : rho.values()) {
    if (v < 0.0) throw ValidationError("density must be non-negative");
  }
}

}  // namespace

std::vector<double> sample_line(const RealField& rho, std::size_t count, std::uint64_t seed, int threads) {
  const Grid& g = rho.grid();
  if (g.dims() != 1) throw ValidationError("sample_line needs a line grid");
  check_density(rho);
  const LinearTable table = build_table(rho.span(), g.origin(0), g.spacing(0));
  if (!(table.total() > 0.0)) throw ValidationError("density integrates to zero");
  std::vector<double> out(count);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      RandomStream rng(seed, n);
      const double u = rng.uniform();
      out[n] = table.locate(u * table.total());
    }
  });
  return out;
}

ParticleEnsemble sample_from_density(const RealField& rho, std::size_t count, std::uint64_t seed, int threads) {
  const Grid& g = rho.grid();
  ParticleEnsemble ensemble;
  ensemble.seed = seed;
  ensemble.dims = g.dims();
  if (g.dims() == 1) {
    for (double x : sample_line(rho, count, seed, threads)) ensemble.positions.push_back({x, 0.0});
    return ensemble;
  }
  check_density(rho);
  const std::size_t nx = g.nx();
  const std::size_t ny = g.ny();
  std::vector<LinearTable> rows;
  rows.reserve(ny);
  std::vector<double> marginal(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    rows.push_back(build_table(rho.span().subspan(j * nx, nx), g.origin(0), g.spacing(0)));
    marginal[j] = rows.back().total();
  }
  const LinearTable column = build_table(marginal, g.origin(1), g.spacing(1));
  if (!(column.total() > 0.0)) throw ValidationError("density integrates to zero");

  ensemble.positions.resize(count);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      RandomStream rng(seed, n);
      const double uy = rng.uniform() * column.total();
      const std::size_t j = column.interval(uy);
      const double s = column.fraction(j, uy);
      const double y = g.origin(1) + (static_cast<double>(j) + s) * g.spacing(1);
      // Bilinear density at fixed y is a blend of the two neighbouring rows.
      const double lower = (1.0 - s) * marginal[j];
      const double upper = s * marginal[j + 1];
      const LinearTable& row = rng.uniform() * (lower + upper) < lower ? rows[j] : rows[j + 1];
      const double x = row.locate(rng.uniform() * row.total());
      ensemble.positions[n] = {x, y};
    }
  });
  return ensemble;
}

}  // namespace wavelab::pilot
