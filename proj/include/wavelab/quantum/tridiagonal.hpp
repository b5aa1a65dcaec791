#pragma once

#include <span>
#include <vector>

#include "wavelab/core/field.hpp"

namespace wavelab::quantum {

/// Thomas-algorithm factorization of a tridiagonal system with constant
/// off-diagonal `off` (same value below and above the diagonal).
///
/// The forward-elimination coefficients are computed once; each solve is then
/// a forward and a backward sweep. Throws LinearSolveError on a vanishing or
/// non-finite pivot.
class TridiagonalFactor {
 public:
  TridiagonalFactor() = default;
  TridiagonalFactor(Complex off, std::span<const Complex> diagonal);

  std::size_t size() const noexcept { return inv_pivot_.size(); }
  Complex off() const noexcept { return off_; }
  std::span<const Complex> upper_ratio() const noexcept { return upper_ratio_; }
  std::span<const Complex> inv_pivot() const noexcept { return inv_pivot_; }

  /// Solves in place: `rhs` holds the right-hand side on entry, x on exit.
  void solve(std::span<Complex> rhs) const;

 private:
  Complex off_{};
  std::vector<Complex> upper_ratio_;
  std::vector<Complex> inv_pivot_;
};

/// General tridiagonal solve (no pivoting). lower[0] and upper[n-1] are ignored.
std::vector<Complex> solve_tridiagonal(std::span<const Complex> lower, std::span<const Complex> diagonal,
                                       std::span<const Complex> upper, std::span<const Complex> rhs);

/// Forward elimination for a single row of a factorization; exposed for the
/// column-batched sweeps of the 2D solver.
void eliminate(Complex off, std::span<const Complex> diagonal, std::span<Complex> upper_ratio,
               std::span<Complex> inv_pivot);

}  // namespace wavelab::quantum
