#include "wavelab/pilot/continuity_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/calculus.hpp"

namespace wavelab::pilot {

namespace {

double cell_length(std::size_t i, std::size_t n, double h, bool periodic) {
  if (periodic) return h;
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

double upwind(double u, double left, double right) { return u > 0.0 ? u * left : u * right; }

}  // namespace

double oracle_mass(const RealField& rho, bool periodic) {
  const Grid& g = rho.grid();
  std::vector<double> terms(rho.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::size_t i = k % g.nx();
    double v = cell_length(i, g.nx(), g.spacing(0), periodic);
    if (g.dims() == 2) v *= cell_length(k / g.nx(), g.ny(), g.spacing(1), periodic);
    terms[k] = v * rho[k];
  }
  return compensated_sum(terms);
}

RealField continuity_oracle(const RealField& rho0, const VelocityProvider& velocity,
                            const ContinuityOracleConfig& config) {
  if (!(config.dt > 0.0)) throw ValidationError("oracle dt must be positive");
  if (!velocity) throw ValidationError("oracle needs a velocity provider");
  const Grid& g = rho0.grid();
  const int dims = g.dims();
  const std::size_t nx = g.nx();
  const std::size_t ny = dims == 2 ? g.ny() : 1;
  const bool periodic = config.periodic;
  std::vector<double> rho = rho0.values();
  std::vector<double> change(rho.size());

  for (std::size_t step = 0; step < config.steps; ++step) {
    const double t = config.t0 + (static_cast<double>(step) + 0.5) * config.dt;
    const std::vector<RealField> v = velocity(t);
    if (static_cast<int>(v.size()) != dims) throw ValidationError("velocity needs one component per axis");
    for (const RealField& c : v) require_same_grid(g, c.grid(), "continuity_oracle");
    double cfl = 0.0;
    for (int axis = 0; axis < dims; ++axis) {
      for (double u : v[axis].values()) cfl = std::max(cfl, std::abs(u) * config.dt / g.spacing(axis));
    }
    if (cfl > config.max_cfl) throw CflError("continuity oracle CFL number exceeds the limit");

    std::fill(change.begin(), change.end(), 0.0);
    for (int axis = 0; axis < dims; ++axis) {
      const std::size_t n = g.points(axis);
      const std::size_t stride = axis == 0 ? 1 : nx;
      const std::size_t lines = axis == 0 ? ny : nx;
      const double h = g.spacing(axis);
      for (std::size_t line = 0; line < lines; ++line) {
        const std::size_t base = axis == 0 ? line * nx : line;
        const std::size_t faces = periodic ? n : n - 1;
        for (std::size_t f = 0; f < faces; ++f) {
          const std::size_t a = base + f * stride;
          const std::size_t b = base + ((f + 1) % n) * stride;
          const double u = 0.5 * (v[axis][a] + v[axis][b]);
          const double flux = upwind(u, rho[a], rho[b]) * config.dt;
          // Each node's cell length along this axis turns flux into density.
          const std::size_t ia = f;
          const std::size_t ib = (f + 1) % n;
          change[a] -= flux / cell_length(ia, n, h, periodic);
          change[b] += flux / cell_length(ib, n, h, periodic);
        }
      }
    }
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] += change[k];
  }
  return RealField(g, std::move(rho));
}

}  // namespace wavelab::pilot
