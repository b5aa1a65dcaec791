#include "wavelab/optics/snell.hpp"

#include <cmath>
#include <numbers>

#include "wavelab/core/error.hpp"

namespace wavelab::optics {

namespace {

void require_incidence(double theta) {
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2)) {
    throw DomainError("incidence angle must lie in [0, pi/2)");
  }
}

void require_positive(double a, double b, const char* what) {
  if (!(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b))) {
    throw ValidationError(std::string(what) + " must be finite and positive");
  }
}

}  // namespace

double reflect(double theta1) {
  require_incidence(theta1);
  return theta1;
}

double snell_corpuscular(double theta1, double v1, double v2) {
  require_incidence(theta1);
  require_positive(v1, v2, "speeds");
  const double s = std::sin(theta1) * v1 / v2;
  if (s > 1.0) throw NoTransmission(s);
  return std::asin(s);
}

double snell_wave(double theta1, double n1, double n2) {
  require_incidence(theta1);
  require_positive(n1, n2, "refractive indices");
  const double s = std::sin(theta1) * n1 / n2;
  if (s > 1.0) throw TotalInternalReflection(s);
  return std::asin(s);
}

}  // namespace wavelab::optics
