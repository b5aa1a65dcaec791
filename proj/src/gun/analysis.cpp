#include "wavelab/gun/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/calculus.hpp"

namespace wavelab::gun {

namespace {

void require_line(const RealField& f) {
  if (f.grid().dims() != 1) throw ValidationError("profile analysis needs a line profile");
}

std::vector<Peak> nearest(std::vector<Peak> peaks, double center, std::size_t count) {
  std::stable_sort(peaks.begin(), peaks.end(), [center](const Peak& a, const Peak& b) {
    return std::abs(a.position - center) < std::abs(b.position - center);
  });
  if (peaks.size() > count) peaks.resize(count);
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.position < b.position; });
  return peaks;
}

double min_between(const RealField& f, double a, double b) {
  const Grid& g = f.grid();
  double lowest = INFINITY;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double y = g.coord(0, i);
    if (y > a && y < b) lowest = std::min(lowest, f[i]);
  }
  return lowest;
}

}  // namespace

std::vector<Peak> local_maxima(const RealField& profile, double min_relative) {
  require_line(profile);
  const Grid& g = profile.grid();
  const double top = *std::max_element(profile.values().begin(), profile.values().end());
  std::vector<Peak> peaks;
  if (!(top > 0.0)) return peaks;
  for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
    const double l = profile[i - 1], c = profile[i], r = profile[i + 1];
    if (!(c > l && c >= r) || c < min_relative * top) continue;
    const double curvature = l - 2.0 * c + r;
    const double shift = curvature < 0.0 ? 0.5 * (l - r) / curvature : 0.0;
    peaks.push_back({g.coord(0, i) + shift * g.spacing(0), c - 0.25 * (l - r) * shift});
  }
  return peaks;
}

double fringe_spacing(const RealField& profile, double center, std::size_t count) {
  if (count < 2) throw ValidationError("fringe spacing needs at least two maxima");
  const auto peaks = nearest(local_maxima(profile), center, count);
  if (peaks.size() < 2) throw NumericalError("profile has fewer than two fringes");
  return (peaks.back().position - peaks.front().position) / static_cast<double>(peaks.size() - 1);
}

double fringe_visibility(const RealField& profile, double center) {
  const auto peaks = nearest(local_maxima(profile), center, 3);
  if (peaks.size() < 3) throw NumericalError("profile has fewer than three fringes");
  double worst = 1.0;
  for (std::size_t p = 0; p + 1 < peaks.size(); ++p) {
    const double high = 0.5 * (peaks[p].value + peaks[p + 1].value);
    const double low = min_between(profile, peaks[p].position, peaks[p + 1].position);
    worst = std::min(worst, (high - low) / (high + low));
  }
  return worst;
}

double fwhm(const RealField& profile) {
  require_line(profile);
  const Grid& g = profile.grid();
  const auto& v = profile.values();
  const std::size_t peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const double half = 0.5 * v[peak];
  if (!(half > 0.0)) throw NumericalError("profile is zero");
  std::size_t lo = peak;
  while (lo > 0 && v[lo - 1] >= half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < v.size() && v[hi + 1] >= half) ++hi;
  if (lo == 0 || hi + 1 == v.size()) throw NumericalError("half-maximum crossing outside the screen");
  const double left = g.coord(0, lo) - g.spacing(0) * (v[lo] - half) / (v[lo] - v[lo - 1]);
  const double right = g.coord(0, hi) + g.spacing(0) * (v[hi] - half) / (v[hi] - v[hi + 1]);
  return right - left;
}

double profile_mean(const RealField& profile) {
  require_line(profile);
  const double mass = integrate(profile);
  if (!(mass > 0.0)) throw NumericalError("profile is zero");
  std::vector<double> moment(profile.size());
  for (std::size_t i = 0; i < moment.size(); ++i) moment[i] = profile.grid().coord(0, i) * profile[i];
  return integrate(RealField(profile.grid(), std::move(moment))) / mass;
}

double mirror_asymmetry(const RealField& profile, double center) {
  require_line(profile);
  const Grid& g = profile.grid();
  const RealField diff = RealField::sample(g, [&](double y, double) {
    const double mirrored = 2.0 * center - y;
    const double other = g.contains({mirrored, 0.0}) ? interpolate(profile, {mirrored, 0.0}) : 0.0;
    return std::abs(interpolate(profile, {y, 0.0}) - other);
  });
  return integrate(diff) / integrate(profile);
}

std::vector<double> double_slit_minima(double wavelength, double distance, double separation, std::size_t count) {
  if (!(wavelength > 0.0 && distance > 0.0 && separation > 0.0)) {
    throw ValidationError("minima need positive wavelength, distance and separation");
  }
  const double spacing = wavelength * distance / separation;
  std::vector<double> out;
  for (std::size_t m = 0; out.size() < count; ++m) {
    const double y = (static_cast<double>(m) + 0.5) * spacing;
    out.push_back(-y);
    if (out.size() < count) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool fraunhofer_regime(double wavelength, double distance, double aperture) {
  return distance >= aperture * aperture / wavelength;
}

double fraction_in_windows(std::span<const double> samples, std::span<const double> centres, double half_width) {
  if (samples.empty()) return 0.0;
  std::size_t inside = 0;
  for (double y : samples) {
    for (double c : centres) {
      if (std::abs(y - c) <= half_width) {
        ++inside;
        break;
      }
    }
  }
  return static_cast<double>(inside) / static_cast<double>(samples.size());
}

}  // namespace wavelab::gun
