#include "wavelab/quantum/tridiagonal.hpp"

#include <cmath>

namespace wavelab::quantum {

namespace {

constexpr double kMinPivot = 1e-300;

Complex checked_inverse(Complex pivot) {
  const double mag = std::abs(pivot);
  if (!(mag > kMinPivot) || !std::isfinite(mag)) {
    throw LinearSolveError("tridiagonal pivot vanished (check dt / dx^2 and the potential)");
  }
  return 1.0 / pivot;
}

}  // namespace

void eliminate(Complex off, std::span<const Complex> diagonal, std::span<Complex> upper_ratio,
               std::span<Complex> inv_pivot) {
  const std::size_t n = diagonal.size();
  if (n == 0) return;
  inv_pivot[0] = checked_inverse(diagonal[0]);
  upper_ratio[0] = off * inv_pivot[0];
  for (std::size_t i = 1; i < n; ++i) {
    inv_pivot[i] = checked_inverse(diagonal[i] - off * upper_ratio[i - 1]);
    upper_ratio[i] = off * inv_pivot[i];
  }
}

TridiagonalFactor::TridiagonalFactor(Complex off, std::span<const Complex> diagonal)
    : off_(off), upper_ratio_(diagonal.size()), inv_pivot_(diagonal.size()) {
  eliminate(off_, diagonal, upper_ratio_, inv_pivot_);
}

void TridiagonalFactor::solve(std::span<Complex> rhs) const {
  const std::size_t n = inv_pivot_.size();
  if (rhs.size() != n) throw ValidationError("right-hand side size does not match the factorization");
  if (n == 0) return;
  rhs[0] *= inv_pivot_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - off_ * rhs[i - 1]) * inv_pivot_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_ratio_[i] * rhs[i + 1];
}

std::vector<Complex> solve_tridiagonal(std::span<const Complex> lower, std::span<const Complex> diagonal,
                                       std::span<const Complex> upper, std::span<const Complex> rhs) {
  const std::size_t n = diagonal.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw ValidationError("tridiagonal bands must have equal length");
  }
  std::vector<Complex> c(n);
  std::vector<Complex> x(rhs.begin(), rhs.end());
  if (n == 0) return x;
  Complex inv = checked_inverse(diagonal[0]);
  c[0] = upper[0] * inv;
  x[0] *= inv;
  for (std::size_t i = 1; i < n; ++i) {
    inv = checked_inverse(diagonal[i] - lower[i] * c[i - 1]);
    c[i] = upper[i] * inv;
    x[i] = (x[i] - lower[i] * x[i - 1]) * inv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace wavelab::quantum
