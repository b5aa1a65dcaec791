#include "wavelab/core/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace wavelab {

namespace {

struct AxisLayout {
  std::size_t n;       // points along the axis
  std::size_t stride;  // flat-index stride along the axis
  std::size_t lines;   // number of independent lines
  double h;
};

AxisLayout layout(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dims()) throw GridError("axis out of range for grid");
  if (axis == 0) return {g.nx(), 1, g.dims() == 2 ? g.ny() : 1, g.spacing(0)};
  return {g.ny(), g.nx(), g.nx(), g.spacing(1)};
}

std::size_t line_start(const Grid& g, int axis, std::size_t line) {
  return axis == 0 ? line * g.nx() : line;
}

template <class T>
Field<T> first_derivative(const Field<T>& f, int axis) {
  const Grid& g = f.grid();
  const AxisLayout L = layout(g, axis);
  if (L.n < 3) throw GridError("derivative needs at least 3 points per axis");
  const auto& v = f.values();
  std::vector<T> out(v.size());
  const double inv2h = 1.0 / (2.0 * L.h);
  for (std::size_t line = 0; line < L.lines; ++line) {
    const std::size_t base = line_start(g, axis, line);
    auto at = [&](std::size_t i) -> const T& { return v[base + i * L.stride]; };
    out[base] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h;
    for (std::size_t i = 1; i + 1 < L.n; ++i) {
      out[base + i * L.stride] = (at(i + 1) - at(i - 1)) * inv2h;
    }
    const std::size_t e = L.n - 1;
    out[base + e * L.stride] = (3.0 * at(e) - 4.0 * at(e - 1) + at(e - 2)) * inv2h;
  }
  return Field<T>(g, std::move(out));
}

template <class T>
void add_second_derivative(const Field<T>& f, int axis, std::vector<T>& out) {
  const Grid& g = f.grid();
  const AxisLayout L = layout(g, axis);
  if (L.n < 4) throw GridError("second derivative needs at least 4 points per axis");
  const auto& v = f.values();
  const double inv_h2 = 1.0 / (L.h * L.h);
  for (std::size_t line = 0; line < L.lines; ++line) {
    const std::size_t base = line_start(g, axis, line);
    auto at = [&](std::size_t i) -> const T& { return v[base + i * L.stride]; };
    out[base] += (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) * inv_h2;
    for (std::size_t i = 1; i + 1 < L.n; ++i) {
      out[base + i * L.stride] += (at(i + 1) - 2.0 * at(i) + at(i - 1)) * inv_h2;
    }
    const std::size_t e = L.n - 1;
    out[base + e * L.stride] += (2.0 * at(e) - 5.0 * at(e - 1) + 4.0 * at(e - 2) - at(e - 3)) * inv_h2;
  }
}

template <class T>
Field<T> laplacian_impl(const Field<T>& f) {
  std::vector<T> out(f.size(), T{});
  for (int axis = 0; axis < f.grid().dims(); ++axis) add_second_derivative(f, axis, out);
  return Field<T>(f.grid(), std::move(out));
}

template <class T>
std::vector<Field<T>> gradient_impl(const Field<T>& f) {
  std::vector<Field<T>> out;
  for (int axis = 0; axis < f.grid().dims(); ++axis) out.push_back(first_derivative(f, axis));
  return out;
}

// Trapezoidal weight of node k (without the cell volume).
double trapezoid_weight(const Grid& g, std::size_t k) {
  const std::size_t i = k % g.nx();
  double w = (i == 0 || i + 1 == g.nx()) ? 0.5 : 1.0;
  if (g.dims() == 2) {
    const std::size_t j = k / g.nx();
    if (j == 0 || j + 1 == g.ny()) w *= 0.5;
  }
  return w;
}

double cell_volume(const Grid& g) {
  double v = g.spacing(0);
  if (g.dims() == 2) v *= g.spacing(1);
  return v;
}

struct CellCoord {
  std::size_t i;
  double t;
};

CellCoord locate(const Grid& g, int axis, double x) {
  const std::size_t n = g.points(axis);
  double u = (x - g.origin(axis)) / g.spacing(axis);
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= n - 1) i = n - 2;
  return {i, u - static_cast<double>(i)};
}

template <class T>
T interpolate_impl(const Field<T>& f, Vec2 p) {
  const Grid& g = f.grid();
  const CellCoord cx = locate(g, 0, p.x);
  if (g.dims() == 1) {
    return (1.0 - cx.t) * f.at(cx.i) + cx.t * f.at(cx.i + 1);
  }
  const CellCoord cy = locate(g, 1, p.y);
  const T lower = (1.0 - cx.t) * f.at(cx.i, cy.i) + cx.t * f.at(cx.i + 1, cy.i);
  const T upper = (1.0 - cx.t) * f.at(cx.i, cy.i + 1) + cx.t * f.at(cx.i + 1, cy.i + 1);
  return (1.0 - cy.t) * lower + cy.t * upper;
}

}  // namespace

RealField partial(const RealField& f, int axis) { return first_derivative(f, axis); }
ComplexField partial(const ComplexField& f, int axis) { return first_derivative(f, axis); }

std::vector<RealField> gradient(const RealField& f) { return gradient_impl(f); }
std::vector<ComplexField> gradient(const ComplexField& f) { return gradient_impl(f); }

RealField laplacian(const RealField& f) { return laplacian_impl(f); }
ComplexField laplacian(const ComplexField& f) { return laplacian_impl(f); }

RealField divergence(std::span<const RealField> components) {
  if (components.empty()) throw ValidationError("divergence of an empty vector field");
  const Grid& g = components.front().grid();
  if (static_cast<int>(components.size()) != g.dims()) {
    throw ValidationError("divergence needs one component per grid axis");
  }
  std::vector<double> out(g.size(), 0.0);
  for (int axis = 0; axis < g.dims(); ++axis) {
    require_same_grid(g, components[axis].grid(), "divergence");
    const RealField d = partial(components[axis], axis);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += d[k];
  }
  return RealField(g, std::move(out));
}

RealField gradient_squared(const RealField& f) {
  const auto grad = gradient(f);
  std::vector<double> out(f.size(), 0.0);
  for (const auto& component : grad) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += component[k] * component[k];
  }
  return RealField(f.grid(), std::move(out));
}

RealField time_derivative(const TimeTriple<double>& s) {
  require_same_grid(s.previous.grid(), s.next.grid(), "time_derivative");
  require_same_grid(s.previous.grid(), s.current.grid(), "time_derivative");
  if (!(s.dt > 0.0)) throw ValidationError("snapshot spacing dt must be positive");
  std::vector<double> out(s.current.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (s.next[k] - s.previous[k]) / (2.0 * s.dt);
  return RealField(s.current.grid(), std::move(out));
}

ComplexField second_time_derivative(const TimeTriple<Complex>& s) {
  require_same_grid(s.previous.grid(), s.next.grid(), "second_time_derivative");
  require_same_grid(s.previous.grid(), s.current.grid(), "second_time_derivative");
  if (!(s.dt > 0.0)) throw ValidationError("snapshot spacing dt must be positive");
  std::vector<Complex> out(s.current.size());
  const double inv = 1.0 / (s.dt * s.dt);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (s.next[k] - 2.0 * s.current[k] + s.previous[k]) * inv;
  }
  return ComplexField(s.current.grid(), std::move(out));
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

double integrate(const RealField& f) {
  const Grid& g = f.grid();
  std::vector<double> terms(f.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = trapezoid_weight(g, k) * f[k];
  return compensated_sum(terms) * cell_volume(g);
}

RealField density(const ComplexField& psi) {
  return psi.map([](Complex z) { return std::norm(z); });
}

double norm_squared_integral(const ComplexField& psi) { return integrate(density(psi)); }

ComplexField normalize(const ComplexField& psi) {
  const double n2 = norm_squared_integral(psi);
  if (!(n2 > 0.0)) throw NormalizationError("cannot normalize a zero field");
  const double scale = 1.0 / std::sqrt(n2);
  return psi.map([scale](Complex z) { return z * scale; });
}

ComplexField gaussian_packet(const Grid& grid, Vec2 center, double sigma, Vec2 k0) {
  for (int axis = 0; axis < grid.dims(); ++axis) {
    if (!(sigma >= 3.0 * grid.spacing(axis))) {
      throw DomainError("packet width must be at least 3 grid spacings");
    }
  }
  const double inv4s2 = 1.0 / (4.0 * sigma * sigma);
  const bool plane = grid.dims() == 2;
  auto envelope = [&](Vec2 p) {
    const double dx = p.x - center.x;
    const double dy = plane ? p.y - center.y : 0.0;
    return std::exp(-(dx * dx + dy * dy) * inv4s2);
  };
  if (!grid.contains(plane ? center : Vec2{center.x, 0.0})) {
    throw DomainError("packet centre lies outside the grid");
  }
  double boundary_peak = 0.0;
  std::vector<Complex> values(grid.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Vec2 p = grid.position(k);
    const double a = envelope(p);
    const double phase = k0.x * p.x + (plane ? k0.y * p.y : 0.0);
    values[k] = std::polar(a, phase);
    const std::size_t i = k % grid.nx();
    const std::size_t j = k / grid.nx();
    const bool edge = i == 0 || i + 1 == grid.nx() || (plane && (j == 0 || j + 1 == grid.ny()));
    if (edge) boundary_peak = std::max(boundary_peak, a);
  }
  // Peak of the envelope is 1 at the centre.
  if (boundary_peak >= 1e-8) {
    throw DomainError("packet touches the domain boundary (|psi| >= 1e-8 of peak)");
  }
  return normalize(ComplexField(grid, std::move(values)));
}

ComplexField amplitude_phase_compose(const RealField& amplitude, const RealField& phase, double hbar) {
  require_same_grid(amplitude.grid(), phase.grid(), "amplitude_phase_compose");
  if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
  std::vector<Complex> out(amplitude.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = amplitude[k] * std::polar(1.0, phase[k] / hbar);
  return ComplexField(amplitude.grid(), std::move(out));
}

AmplitudePhase amplitude_phase_decompose(const ComplexField& psi, double hbar, double threshold) {
  if (!(hbar > 0.0)) throw ValidationError("hbar must be positive");
  const Grid& g = psi.grid();
  const std::size_t n = psi.size();
  std::vector<double> amp(n);
  Mask mask(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    amp[k] = std::abs(psi[k]);
    mask[k] = amp[k] > threshold ? 1 : 0;
  }
  if (std::none_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; })) {
    throw NumericalError("amplitude below threshold everywhere");
  }

  std::vector<double> phase(n, 0.0);
  std::vector<std::uint8_t> visited(n, 0);
  const bool plane = g.dims() == 2;
  std::deque<std::size_t> queue;
  for (;;) {
    // Seed each connected component at its largest amplitude.
    std::size_t seed = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask[k] && !visited[k] && (seed == n || amp[k] > amp[seed])) seed = k;
    }
    if (seed == n) break;
    visited[seed] = 1;
    phase[seed] = hbar * std::arg(psi[seed]);
    queue.push_back(seed);
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      const std::size_t i = k % g.nx();
      const std::size_t j = k / g.nx();
      std::size_t neighbours[4];
      int count = 0;
      if (plane && j > 0) neighbours[count++] = k - g.nx();
      if (i > 0) neighbours[count++] = k - 1;
      if (i + 1 < g.nx()) neighbours[count++] = k + 1;
      if (plane && j + 1 < g.ny()) neighbours[count++] = k + g.nx();
      for (int c = 0; c < count; ++c) {
        const std::size_t m = neighbours[c];
        if (!mask[m] || visited[m]) continue;
        visited[m] = 1;
        phase[m] = phase[k] + hbar * std::arg(psi[m] * std::conj(psi[k]));
        queue.push_back(m);
      }
    }
  }
  return {RealField(g, std::move(amp)), RealField(g, std::move(phase)), std::move(mask)};
}

double interpolate(const RealField& f, Vec2 p) { return interpolate_impl(f, p); }
Complex interpolate(const ComplexField& f, Vec2 p) { return interpolate_impl(f, p); }

Mask full_mask(const Grid& grid) { return Mask(grid.size(), 1); }

Mask erode(const Grid& grid, const Mask& mask, int layers) {
  if (mask.size() != grid.size()) throw GridError("mask size does not match grid");
  Mask current = mask;
  const bool plane = grid.dims() == 2;
  for (int layer = 0; layer < layers; ++layer) {
    Mask next(current.size(), 0);
    for (std::size_t k = 0; k < current.size(); ++k) {
      if (!current[k]) continue;
      const std::size_t i = k % grid.nx();
      const std::size_t j = k / grid.nx();
      if (i == 0 || i + 1 == grid.nx()) continue;
      if (!current[k - 1] || !current[k + 1]) continue;
      if (plane) {
        if (j == 0 || j + 1 == grid.ny()) continue;
        if (!current[k - grid.nx()] || !current[k + grid.nx()]) continue;
      }
      next[k] = 1;
    }
    current = std::move(next);
  }
  return current;
}

ResidualStats residual_stats(const RealField& residual, const Mask& mask) {
  if (mask.size() != residual.size()) throw GridError("mask size does not match residual");
  ResidualStats stats;
  std::vector<double> squares;
  squares.reserve(residual.size());
  for (std::size_t k = 0; k < residual.size(); ++k) {
    if (!mask[k]) continue;
    const double r = residual[k];
    stats.max_abs = std::max(stats.max_abs, std::abs(r));
    squares.push_back(r * r);
  }
  stats.evaluated = squares.size();
  stats.masked_fraction = 1.0 - static_cast<double>(stats.evaluated) / static_cast<double>(residual.size());
  if (stats.evaluated > 0) {
    stats.rms = std::sqrt(compensated_sum(squares) / static_cast<double>(stats.evaluated));
  }
  return stats;
}

}  // namespace wavelab
