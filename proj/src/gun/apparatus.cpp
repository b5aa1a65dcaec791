#include "wavelab/gun/apparatus.hpp"

#include <cmath>
#include <numbers>

#include "wavelab/core/calculus.hpp"

namespace wavelab::gun {

double Barrier::transmission(double y) const {
  for (const Slit& s : slits) {
    if (std::abs(y - s.center) <= 0.5 * s.width) return 1.0;
  }
  return 0.0;
}

std::string to_string(DetectionMode mode) { return mode == DetectionMode::Bohm ? "bohm" : "copenhagen"; }

DetectionMode detection_mode_from_string(const std::string& name) {
  if (name == "copenhagen") return DetectionMode::Copenhagen;
  if (name == "bohm") return DetectionMode::Bohm;
  throw ValidationError("detection mode must be copenhagen or bohm, got '" + name + "'");
}

Grid ApparatusSpec::grid() const { return Grid::plane(origin, extents, nx, ny); }

std::size_t ApparatusSpec::absorber_cells(int axis) const {
  const double spacing = axis == 0 ? extents.x / static_cast<double>(nx - 1) : extents.y / static_cast<double>(ny - 1);
  return static_cast<std::size_t>(std::ceil(absorber_width / spacing));
}

std::size_t ApparatusSpec::steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

double ApparatusSpec::wavelength() const { return 2.0 * std::numbers::pi / k0; }

double ApparatusSpec::screen_distance() const {
  return screen_x - (barrier ? barrier->x : packet_center.x);
}

std::vector<std::string> ApparatusSpec::validate() const {
  constants.validate();
  const Grid g = grid();
  const double x0 = origin.x;
  const double x1 = origin.x + extents.x;
  const double absorber_start = x1 - absorber_width;
  if (!(screen_x > x0 && screen_x < absorber_start)) {
    throw ValidationError("screen must lie inside the domain, before the absorbing layer");
  }
  if (barrier) {
    if (!(barrier->x > x0 && barrier->x < screen_x)) throw ValidationError("barrier must lie between the source and the screen");
    for (const Slit& s : barrier->slits) {
      if (!(s.width >= 4.0 * g.spacing(1))) throw ValidationError("slit narrower than 4 grid spacings");
    }
  }
  if (!(packet_center.x < screen_x)) throw ValidationError("packet must start before the screen");
  if (!(k0 > 0.0) || !(sigma > 0.0)) throw ValidationError("packet needs k0 > 0 and sigma > 0");
  if (!(dt > 0.0) || !(duration > 0.0)) throw ValidationError("run needs dt > 0 and duration > 0");
  if (shots == 0 || bins == 0) throw ValidationError("shots and bins must be positive");
  if (absorber_cells(0) < 8 || absorber_cells(1) < 8) throw ValidationError("absorbing layer must be at least 8 cells wide");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  std::vector<std::string> warnings;
  if (k0 * sigma < 5.0) warnings.push_back("beam poorly collimated: k0 sigma < 5");
  return warnings;
}

ApparatusSpec default_apparatus(int experiment, double width, double separation) {
  ApparatusSpec spec;
  switch (experiment) {
    case 1:
      break;
    case 2:
      spec.barrier = Barrier{28.0, {{0.0, width > 0.0 ? width : 4.0}}};
      break;
    case 3: {
      const double w = width > 0.0 ? width : 2.0;
      const double d = separation > 0.0 ? separation : 8.0;
      spec.barrier = Barrier{28.0, {{-0.5 * d, w}, {0.5 * d, w}}};
      break;
    }
    default:
      throw ValidationError("experiment must be 1, 2 or 3");
  }
  return spec;
}

MaskResult apply_mask(const ComplexField& psi, const Barrier& barrier) {
  const Grid& g = psi.grid();
  if (g.dims() != 2) throw ValidationError("apply_mask needs a plane grid");
  if (!(barrier.x > g.origin(0) && barrier.x < g.upper(0))) throw DomainError("barrier plane outside the domain");
  const double before = norm_squared_integral(psi);
  std::vector<Complex> out = psi.values();
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double t = barrier.transmission(g.coord(1, j));
    if (t == 1.0) continue;
    for (std::size_t i = 0; i < g.nx(); ++i) out[g.index(i, j)] *= t;
  }
  ComplexField masked(g, std::move(out));
  const double after = norm_squared_integral(masked);
  const double transmitted = before > 0.0 ? after / before : 0.0;
  if (!(transmitted >= 1e-6)) throw TransmissionError("barrier transmits less than 1e-6 of the beam");
  if (transmitted == 1.0) return {psi, 1.0, 0.0};
  return {normalize(masked), transmitted, 1.0 - transmitted};
}

}  // namespace wavelab::gun
