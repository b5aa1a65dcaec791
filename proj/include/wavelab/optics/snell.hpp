#pragma once

namespace wavelab::optics {

// Angles are in radians, measured from the surface normal.

/// Law of reflection: the angle of reflection equals the angle of incidence.
double reflect(double theta1);

/// Refraction of light corpuscles, whose normal momentum changes at the
/// interface while the tangential one is conserved: sin(theta2) =
/// sin(theta1) v1 / v2. Throws NoTransmission when that exceeds one.
double snell_corpuscular(double theta1, double v1, double v2);

/// Refraction of a wavefront: sin(theta2) = sin(theta1) n1 / n2, i.e.
/// sin(theta1) v2 / v1. Throws TotalInternalReflection when that exceeds one.
double snell_wave(double theta1, double n1, double n2);

}  // namespace wavelab::optics
