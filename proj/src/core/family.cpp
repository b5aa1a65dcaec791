#include "wavelab/core/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace wavelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cubic Hermite on the unit interval.
double hermite(double p0, double m0, double p1, double m1, double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
}

struct Crossing {
  double y;
  double value;
};

// Finds where the Hermite curve of segment (a, b) crosses x = target, if it
// does so in the half-open parameter range [0, 1).
std::optional<Crossing> cross_segment(const FamilyPoint& a, const FamilyPoint& b, double target) {
  const double h = b.tau - a.tau;
  const double lo_x = a.pos.x;
  const double hi_x = b.pos.x;
  const bool inside = (lo_x <= target && target < hi_x) || (hi_x < target && target <= lo_x);
  if (!inside) return std::nullopt;
  auto x_at = [&](double s) { return hermite(a.pos.x, h * a.dpos.x, b.pos.x, h * b.dpos.x, s); };
  // Bisection keeps the root bracketed even where the cubic is not monotone.
  double s0 = 0.0;
  double s1 = 1.0;
  const double f0 = x_at(s0) - target;
  for (int it = 0; it < 80 && s1 - s0 > 1e-16; ++it) {
    const double mid = 0.5 * (s0 + s1);
    const double fm = x_at(mid) - target;
    if ((fm <= 0.0) == (f0 <= 0.0)) {
      s0 = mid;
    } else {
      s1 = mid;
    }
  }
  const double s = 0.5 * (s0 + s1);
  return Crossing{hermite(a.pos.y, h * a.dpos.y, b.pos.y, h * b.dpos.y, s),
                  hermite(a.value, h * a.dvalue, b.value, h * b.dvalue, s)};
}

std::vector<Crossing> crossings(const FamilyMember& member, double target) {
  std::vector<Crossing> out;
  for (std::size_t k = 0; k + 1 < member.size(); ++k) {
    if (auto c = cross_segment(member[k], member[k + 1], target)) out.push_back(*c);
  }
  // The last sample closes the half-open ranges.
  if (!member.empty() && member.back().pos.x == target && member.size() >= 2) {
    out.push_back({member.back().pos.y, member.back().value});
  }
  return out;
}

double lagrange(std::span<const double> xs, std::span<const double> ys, double x) {
  double sum = 0.0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < xs.size(); ++b) {
      if (a != b) w *= (x - xs[b]) / (xs[a] - xs[b]);
    }
    sum += w * ys[a];
  }
  return sum;
}

// Interpolates between sample lo and lo+1 with up to four supporting samples.
double local_cubic(std::span<const double> xs, std::span<const double> ys, std::size_t lo, double x) {
  const std::size_t n = xs.size();
  std::size_t first = lo > 0 ? lo - 1 : 0;
  std::size_t last = std::min(n - 1, lo + 2);
  if (last - first < 3 && n >= 4) {
    if (first == 0) last = std::min(n - 1, first + 3);
    if (last == n - 1) first = last >= 3 ? last - 3 : 0;
  }
  return lagrange(xs.subspan(first, last - first + 1), ys.subspan(first, last - first + 1), x);
}

}  // namespace

AssembledField scattered_to_line(const Grid& grid, std::span<const double> xs, std::span<const double> ys) {
  if (grid.dims() != 1) throw GridError("scattered_to_line needs a line grid");
  if (xs.size() != ys.size() || xs.size() < 2) throw ValidationError("need at least two scattered samples");
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1])) throw ValidationError("scattered samples must be strictly increasing");
  }
  std::vector<double> values(grid.size(), 0.0);
  Mask valid(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(0, i);
    if (x < xs.front() || x > xs.back()) continue;
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t lo = static_cast<std::size_t>(it - xs.begin());
    lo = lo == 0 ? 0 : lo - 1;
    if (lo + 1 >= xs.size()) lo = xs.size() - 2;
    values[i] = local_cubic(xs, ys, lo, x);
    valid[i] = 1;
  }
  return {RealField(grid, std::move(values)), std::move(valid), Mask(grid.size(), 0)};
}

AssembledField assemble_family(const Grid& grid, std::span<const FamilyMember> members) {
  std::vector<double> best(grid.size(), kInf);
  Mask multivalued(grid.size(), 0);
  std::vector<int> hits(grid.size(), 0);

  if (grid.dims() == 1) {
    for (const FamilyMember& member : members) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        for (const Crossing& c : crossings(member, grid.coord(0, i))) {
          ++hits[i];
          best[i] = std::min(best[i], c.value);
        }
      }
    }
  } else {
    std::vector<double> ys;
    std::vector<double> vs;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double x = grid.coord(0, i);
      ys.clear();
      vs.clear();
      bool folded = false;
      for (const FamilyMember& member : members) {
        const auto c = crossings(member, x);
        if (c.empty()) continue;
        if (c.size() > 1) folded = true;
        ys.push_back(c.front().y);
        vs.push_back(c.front().value);
      }
      if (ys.size() < 2) continue;
      // Split the member sequence into runs where y is strictly monotone.
      std::size_t start = 0;
      while (start + 1 < ys.size()) {
        const bool up = ys[start + 1] > ys[start];
        std::size_t end = start + 1;
        while (end + 1 < ys.size() && ((ys[end + 1] > ys[end]) == up) && ys[end + 1] != ys[end]) ++end;
        std::vector<double> run_y(ys.begin() + static_cast<std::ptrdiff_t>(start),
                                  ys.begin() + static_cast<std::ptrdiff_t>(end) + 1);
        std::vector<double> run_v(vs.begin() + static_cast<std::ptrdiff_t>(start),
                                  vs.begin() + static_cast<std::ptrdiff_t>(end) + 1);
        if (!up) {
          std::reverse(run_y.begin(), run_y.end());
          std::reverse(run_v.begin(), run_v.end());
        }
        for (std::size_t j = 0; j < grid.ny(); ++j) {
          const double y = grid.coord(1, j);
          if (y < run_y.front() || y > run_y.back()) continue;
          auto it = std::upper_bound(run_y.begin(), run_y.end(), y);
          std::size_t lo = static_cast<std::size_t>(it - run_y.begin());
          lo = lo == 0 ? 0 : lo - 1;
          if (lo + 1 >= run_y.size()) lo = run_y.size() - 2;
          const double v = local_cubic(run_y, run_v, lo, y);
          const std::size_t k = grid.index(i, j);
          ++hits[k];
          if (folded) ++hits[k];
          best[k] = std::min(best[k], v);
        }
        start = end;
      }
    }
  }

  std::vector<double> values(grid.size(), 0.0);
  Mask valid(grid.size(), 0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (hits[k] == 0) continue;
    valid[k] = 1;
    values[k] = best[k];
    if (hits[k] > 1) multivalued[k] = 1;
  }
  return {RealField(grid, std::move(values)), std::move(valid), std::move(multivalued)};
}

}  // namespace wavelab
