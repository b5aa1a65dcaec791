#include "wavelab/quantum/propagator.hpp"

#include <cmath>
#include <numbers>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/parallel.hpp"

namespace wavelab::quantum {

namespace {

constexpr Complex kI{0.0, 1.0};

double layer_weight(std::size_t index, std::size_t points, std::size_t width) {
  const std::size_t from_edge = std::min(index, points - 1 - index);
  if (from_edge >= width) return 0.0;
  const double s = static_cast<double>(width - from_edge) / static_cast<double>(width);
  return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
}

}  // namespace

void PropagatorConfig::validate(const Grid& grid) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("propagator dt must be positive");
  constants.validate();
  if (scheme == Scheme::CrankNicolson1D && grid.dims() != 1) {
    throw ValidationError("Crank-Nicolson 1D scheme needs a line grid");
  }
  if (scheme == Scheme::ADI2D && grid.dims() != 2) throw ValidationError("ADI scheme needs a plane grid");
  if (absorber) {
    if (!(absorber->strength >= 0.0)) throw ValidationError("absorber strength must be non-negative");
    for (int axis = 0; axis < grid.dims(); ++axis) {
      if (absorber->cells(axis) < 8) throw ValidationError("absorbing layer must be at least 8 cells wide");
      if (2 * absorber->cells(axis) >= grid.points(axis)) throw ValidationError("absorbing layer wider than the grid");
    }
  }
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

Propagator::Propagator(const RealField& potential, PropagatorConfig config, TimeDirection direction)
    : grid_(potential.grid()),
      config_(config),
      sign_(direction == TimeDirection::Forward ? 1.0 : -1.0),
      potential_(grid_.size()) {
  config_.validate(grid_);
  const RealField w = absorber_profile();
  for (std::size_t k = 0; k < potential_.size(); ++k) potential_[k] = Complex(potential[k], -w[k]);

  const double hbar = config_.constants.hbar;
  const double mass = config_.constants.mass;
  const double a = sign_ * config_.dt / (2.0 * hbar);
  const double kx = hbar * hbar / (2.0 * mass * grid_.spacing(0) * grid_.spacing(0));
  const std::size_t nx = grid_.nx();
  off_x_ = -kI * a * kx;
  ratio_x_.assign(grid_.size(), Complex{});
  inv_x_.assign(grid_.size(), Complex{});
  scratch_.assign(grid_.size(), Complex{});

  if (grid_.dims() == 1) {
    std::vector<Complex> diag(nx - 2);
    for (std::size_t i = 1; i + 1 < nx; ++i) diag[i - 1] = 1.0 + kI * a * (2.0 * kx + potential_[i]);
    eliminate(off_x_, diag, std::span(ratio_x_).subspan(1, nx - 2), std::span(inv_x_).subspan(1, nx - 2));
    return;
  }

  const std::size_t ny = grid_.ny();
  const double ky = hbar * hbar / (2.0 * mass * grid_.spacing(1) * grid_.spacing(1));
  off_y_ = -kI * a * ky;
  ratio_y_.assign(grid_.size(), Complex{});
  inv_y_.assign(grid_.size(), Complex{});
  std::vector<Complex> diag(nx - 2);
  for (std::size_t j = 1; j + 1 < ny; ++j) {
    const std::size_t row = j * nx;
    for (std::size_t i = 1; i + 1 < nx; ++i) diag[i - 1] = 1.0 + kI * a * (2.0 * kx + 0.5 * potential_[row + i]);
    eliminate(off_x_, diag, std::span(ratio_x_).subspan(row + 1, nx - 2),
              std::span(inv_x_).subspan(row + 1, nx - 2));
  }
  std::vector<Complex> column(ny - 2);
  std::vector<Complex> ratio(ny - 2);
  std::vector<Complex> inv(ny - 2);
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    for (std::size_t j = 1; j + 1 < ny; ++j) column[j - 1] = 1.0 + kI * a * (2.0 * ky + 0.5 * potential_[j * nx + i]);
    eliminate(off_y_, column, ratio, inv);
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      ratio_y_[j * nx + i] = ratio[j - 1];
      inv_y_[j * nx + i] = inv[j - 1];
    }
  }
}

RealField Propagator::absorber_profile() const {
  std::vector<double> w(grid_.size(), 0.0);
  if (config_.absorber && config_.absorber->strength > 0.0) {
    const auto& layer = *config_.absorber;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::size_t i = k % grid_.nx();
      const std::size_t j = k / grid_.nx();
      double s = layer_weight(i, grid_.nx(), layer.cells(0));
      if (grid_.dims() == 2) s += layer_weight(j, grid_.ny(), layer.cells(1));
      w[k] = layer.strength * s;
    }
  }
  return RealField(grid_, std::move(w));
}

ComplexField Propagator::step(const ComplexField& psi) const {
  require_same_grid(grid_, psi.grid(), "Propagator::step");
  std::vector<Complex> values = psi.values();
  step_in_place(values);
  return ComplexField(grid_, std::move(values));
}

void Propagator::step_in_place(std::vector<Complex>& psi) const {
  if (psi.size() != grid_.size()) throw GridError("state size does not match the propagator grid");
  if (grid_.dims() == 1) {
    step_line(psi);
  } else {
    step_plane(psi);
  }
}

void Propagator::step_line(std::vector<Complex>& psi) const {
  const std::size_t n = grid_.nx();
  const double a = sign_ * config_.dt / (2.0 * config_.constants.hbar);
  const double kx = config_.constants.hbar * config_.constants.hbar /
                    (2.0 * config_.constants.mass * grid_.spacing(0) * grid_.spacing(0));
  std::vector<Complex>& r = scratch_;
  r[0] = r[n - 1] = Complex{};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Complex h_psi = -kx * (psi[i - 1] + psi[i + 1]) + (2.0 * kx + potential_[i]) * psi[i];
    r[i] = psi[i] - kI * a * h_psi;
  }
  // Forward and backward sweeps over the interior.
  r[1] *= inv_x_[1];
  for (std::size_t i = 2; i + 1 < n; ++i) r[i] = (r[i] - off_x_ * r[i - 1]) * inv_x_[i];
  for (std::size_t i = n - 2; i-- > 1;) r[i] -= ratio_x_[i] * r[i + 1];
  psi.swap(r);
  psi[0] = psi[n - 1] = Complex{};
}

void Propagator::step_plane(std::vector<Complex>& psi) const {
  const std::size_t nx = grid_.nx();
  const std::size_t ny = grid_.ny();
  const double hbar = config_.constants.hbar;
  const double mass = config_.constants.mass;
  const Complex ia = kI * (sign_ * config_.dt / (2.0 * hbar));
  const double kx = hbar * hbar / (2.0 * mass * grid_.spacing(0) * grid_.spacing(0));
  const double ky = hbar * hbar / (2.0 * mass * grid_.spacing(1) * grid_.spacing(1));
  std::vector<Complex>& half = scratch_;
  const int threads = config_.threads;

  // x-implicit half step: (1 + i a Hx) half = (1 - i a Hy) psi.
  parallel_for(ny, threads, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const std::size_t row = j * nx;
      if (j == 0 || j + 1 == ny) {
        for (std::size_t i = 0; i < nx; ++i) half[row + i] = Complex{};
        continue;
      }
      half[row] = half[row + nx - 1] = Complex{};
      for (std::size_t i = 1; i + 1 < nx; ++i) {
        const std::size_t k = row + i;
        const Complex hy = -ky * (psi[k - nx] + psi[k + nx]) + (2.0 * ky + 0.5 * potential_[k]) * psi[k];
        half[k] = psi[k] - ia * hy;
      }
      half[row + 1] *= inv_x_[row + 1];
      for (std::size_t i = 2; i + 1 < nx; ++i) {
        const std::size_t k = row + i;
        half[k] = (half[k] - off_x_ * half[k - 1]) * inv_x_[k];
      }
      for (std::size_t i = nx - 2; i-- > 1;) {
        const std::size_t k = row + i;
        half[k] -= ratio_x_[k] * half[k + 1];
      }
    }
  });

  // y-implicit half step: (1 + i a Hy) psi = (1 - i a Hx) half, solved for
  // all columns at once so memory is walked row by row.
  parallel_for(nx, threads, [&](std::size_t i0, std::size_t i1) {
    const std::size_t lo = std::max<std::size_t>(i0, 1);
    const std::size_t hi = std::min(i1, nx - 1);
    for (std::size_t i = i0; i < i1; ++i) {
      psi[i] = Complex{};
      psi[(ny - 1) * nx + i] = Complex{};
    }
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      const std::size_t row = j * nx;
      if (i0 == 0) psi[row] = Complex{};
      if (i1 == nx) psi[row + nx - 1] = Complex{};
      for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t k = row + i;
        const Complex hx = -kx * (half[k - 1] + half[k + 1]) + (2.0 * kx + 0.5 * potential_[k]) * half[k];
        const Complex rhs = half[k] - ia * hx;
        psi[k] = j == 1 ? rhs * inv_y_[k] : (rhs - off_y_ * psi[k - nx]) * inv_y_[k];
      }
    }
    for (std::size_t j = ny - 2; j-- > 1;) {
      const std::size_t row = j * nx;
      for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t k = row + i;
        psi[k] -= ratio_y_[k] * psi[k + nx];
      }
    }
  });
}

ComplexField step(const ComplexField& psi, const RealField& potential, const PropagatorConfig& config) {
  require_same_grid(psi.grid(), potential.grid(), "step");
  return Propagator(potential, config).step(psi);
}

PropagationResult propagate(const ComplexField& psi0, const RealField& potential, const PropagatorConfig& config,
                            std::size_t n_steps, std::span<const Observer> observers, std::size_t norm_stride) {
  require_same_grid(psi0.grid(), potential.grid(), "propagate");
  const Propagator propagator(potential, config);
  const Grid& grid = psi0.grid();
  std::vector<Complex> state = psi0.values();
  std::vector<NormSample> history;
  norm_stride = std::max<std::size_t>(norm_stride, 1);

  auto emit = [&](std::size_t step, bool last) {
    const double t = static_cast<double>(step) * config.dt;
    const bool want_norm = step % norm_stride == 0 || last;
    bool want_obs = false;
    for (const Observer& o : observers) {
      if (o.callback && (step % std::max<std::size_t>(o.stride, 1) == 0 || last)) want_obs = true;
    }
    if (!want_norm && !want_obs) return;
    const ComplexField snapshot(grid, state);
    if (want_norm) history.push_back({step, t, norm_squared_integral(snapshot)});
    for (const Observer& o : observers) {
      if (o.callback && (step % std::max<std::size_t>(o.stride, 1) == 0 || last)) o.callback(step, t, snapshot);
    }
  };

  emit(0, n_steps == 0);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    propagator.step_in_place(state);
    emit(s, s == n_steps);
  }
  return {ComplexField(grid, std::move(state)), std::move(history)};
}

}  // namespace wavelab::quantum
