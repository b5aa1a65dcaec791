#include "wavelab/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "wavelab/cli/csv.hpp"
#include "wavelab/core/calculus.hpp"
#include "wavelab/core/field_io.hpp"
#include "wavelab/gun/analysis.hpp"
#include "wavelab/gun/experiment.hpp"
#include "wavelab/mechanics/action.hpp"
#include "wavelab/optics/eikonal.hpp"
#include "wavelab/optics/ray_tracer.hpp"
#include "wavelab/optics/snell.hpp"
#include "wavelab/pilot/ensemble.hpp"
#include "wavelab/pilot/equivariance.hpp"
#include "wavelab/quantum/observables.hpp"
#include "wavelab/quantum/semiclassical.hpp"

namespace wavelab::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

// Fixed-precision text for summaries (CSV files use format_double).
std::string fixed(double v, int digits = 6) {
  char buffer[64];
  const auto r = std::to_chars(buffer, buffer + sizeof buffer, v, std::chars_format::fixed, digits);
  return std::string(buffer, r.ptr);
}

std::string sci(double v, int digits = 3) {
  char buffer[64];
  const auto r = std::to_chars(buffer, buffer + sizeof buffer, v, std::chars_format::scientific, digits);
  return std::string(buffer, r.ptr);
}

std::string padded(std::size_t v, int width = 6) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

fs::path prepare(const RunConfig& config, const std::string& command, const std::string& target = "") {
  const fs::path dir = config.output_dir();
  emit_manifest(dir, config.manifest(command, target));
  return dir;
}

int verdict(std::ostream& out, const std::string& name, bool pass, const std::string& detail) {
  out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  return pass ? 0 : 1;
}

// ---- wave section ------------------------------------------------------

Grid wave_grid(const RunConfig& c, double refine = 1.0) {
  const auto scaled = [refine](std::size_t n) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n - 1) * refine)) + 1;
  };
  const std::int64_t dims = c.integer("wave", "dims");
  if (dims == 1) return Grid::line(c.number("wave", "x0"), c.number("wave", "extent"), scaled(c.count("wave", "points")));
  if (dims == 2) {
    return Grid::plane({c.number("wave", "x0"), c.number("wave", "y0")},
                       {c.number("wave", "extent"), c.number("wave", "height")}, scaled(c.count("wave", "points")),
                       scaled(c.count("wave", "ny")));
  }
  throw ValidationError("wave.dims must be 1 or 2");
}

mechanics::Potential wave_potential(const RunConfig& c) {
  const std::string kind = c.text("wave", "potential");
  if (kind == "free") return mechanics::Potential::zero();
  if (kind == "harmonic") {
    return mechanics::Potential::harmonic(c.number("wave", "stiffness"),
                                          {c.number("wave", "center_x"), c.number("wave", "center_y")});
  }
  throw ValidationError("wave.potential must be free or harmonic");
}

ComplexField wave_packet(const RunConfig& c, const Grid& grid) {
  const PhysicalConstants k = c.constants();
  const Vec2 center{c.number("wave", "center_x"), grid.dims() == 2 ? c.number("wave", "center_y") : 0.0};
  const std::string kind = c.text("wave", "potential");
  if (kind == "harmonic") {
    // Ground state of the oscillator: sigma^2 = hbar / (2 m omega).
    const double omega = std::sqrt(c.number("wave", "stiffness") / k.mass);
    return gaussian_packet(grid, center, std::sqrt(k.hbar / (2.0 * k.mass * omega)), {c.number("wave", "k0"), 0.0});
  }
  return gaussian_packet(grid, center, c.number("wave", "sigma"), {c.number("wave", "k0"), 0.0});
}

quantum::PropagatorConfig wave_propagator(const RunConfig& c, const Grid& grid, double dt, bool allow_absorber) {
  quantum::PropagatorConfig p;
  p.dt = dt;
  p.scheme = grid.dims() == 1 ? quantum::Scheme::CrankNicolson1D : quantum::Scheme::ADI2D;
  p.constants = c.constants();
  p.threads = c.threads();
  const std::size_t width = c.count("wave", "absorber_width");
  if (allow_absorber && width > 0) p.absorber = quantum::AbsorbingLayer{width, c.number("wave", "absorber_strength")};
  return p;
}

void write_snapshot(const fs::path& dir, std::size_t step, const ComplexField& psi) {
  const std::string stem = "psi_" + padded(step);
  write_field(dir / stem, psi, "psi");
  write_density_pgm(dir / (stem + ".pgm"), psi);
}

// ---- apparatus section ---------------------------------------------------

gun::ApparatusSpec apparatus_spec(const RunConfig& c) {
  const std::int64_t experiment = c.integer("apparatus", "experiment");
  gun::ApparatusSpec spec = gun::default_apparatus(static_cast<int>(experiment), c.number("apparatus", "slit_width"),
                                                   c.number("apparatus", "slit_separation"));
  spec.origin = {c.number("apparatus", "x0"), c.number("apparatus", "y0")};
  spec.extents = {c.number("apparatus", "width"), c.number("apparatus", "height")};
  spec.nx = c.count("apparatus", "nx");
  spec.ny = c.count("apparatus", "ny");
  spec.sigma = c.number("apparatus", "sigma");
  spec.k0 = c.number("apparatus", "k0");
  spec.packet_center = {c.number("apparatus", "packet_x"), c.number("apparatus", "packet_y")};
  if (spec.barrier) spec.barrier->x = c.number("apparatus", "barrier_x");
  spec.screen_x = c.number("apparatus", "screen_x");
  spec.duration = c.number("apparatus", "duration");
  spec.dt = c.number("apparatus", "dt");
  spec.absorber_width = c.number("apparatus", "absorber_width");
  spec.absorber_strength = c.number("apparatus", "absorber_strength");
  spec.mode = gun::detection_mode_from_string(c.text("apparatus", "mode"));
  spec.shots = c.count("apparatus", "shots");
  spec.bins = c.count("apparatus", "bins");
  spec.constants = c.constants();
  spec.threads = c.threads();
  return spec;
}

void write_histogram(const fs::path& path, const gun::ScreenHistogram& h) {
  CsvWriter csv(path, {"bin_center", "count"});
  for (std::size_t b = 0; b < h.bins(); ++b) {
    csv.cell(h.center(b)).cell(h.counts[b]);
    csv.end_row();
  }
}

void write_profile(const fs::path& path, const RealField& profile) {
  CsvWriter csv(path, {"y", "flux"});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    csv.cell(profile.grid().coord(0, i)).cell(profile[i]);
    csv.end_row();
  }
}

void describe_profile(std::ostream& out, const gun::ApparatusSpec& spec, const gun::ExperimentResult& r) {
  const RealField& p = r.flux.profile;
  out << "transmitted fraction " << fixed(r.transmitted) << ", back-flow " << fixed(r.flux.negative_fraction) << '\n';
  out << "screen profile: mean " << fixed(gun::profile_mean(p), 4);
  try {
    out << ", FWHM " << fixed(gun::fwhm(p), 4);
  } catch (const NumericalError&) {
    out << ", FWHM n/a";
  }
  out << '\n';
  if (spec.barrier && spec.barrier->slits.size() == 2) {
    const double d = std::abs(spec.barrier->slits[1].center - spec.barrier->slits[0].center);
    const double expected = spec.wavelength() * spec.screen_distance() / d;
    out << "fringe spacing " << fixed(gun::fringe_spacing(p), 4) << " (far field " << fixed(expected, 4)
        << "), visibility " << fixed(gun::fringe_visibility(p), 4) << '\n';
    const auto minima = gun::double_slit_minima(spec.wavelength(), spec.screen_distance(), d, 4);
    out << "detections within +/- spacing/10 of the first four minima: "
        << fixed(gun::fraction_in_windows(r.detections, minima, 0.1 * expected), 5) << '\n';
  }
  out << "detections " << r.detections.size();
  if (spec.mode == gun::DetectionMode::Bohm) {
    out << " (undetected " << r.undetected << ", left grid " << r.exited << ", node-flagged " << r.flagged << ")";
  }
  out << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
}

// ---- checks ---------------------------------------------------------------

int check_eikonal(const RunConfig& c, std::ostream& out) {
  // Plane wave S = k . r in a uniform medium with n = |k| c / omega.
  const Grid grid = Grid::plane({c.number("ray", "x0"), c.number("ray", "y0")},
                                {c.number("ray", "width"), c.number("ray", "height")}, c.count("ray", "nx"),
                                c.count("ray", "ny"));
  const PhysicalConstants k = c.constants();
  const double n = c.number("ray", "n1");
  const double kmag = n * k.omega / k.c;
  const double angle = c.number("ray", "angle") * kDegree;
  const Vec2 kv{kmag * std::cos(angle), kmag * std::sin(angle)};
  const RealField phase = RealField::sample(grid, [&](double x, double y) { return kv.x * x + kv.y * y; });
  const optics::IndexField index(grid, optics::ConstantIndex{n});
  const RealField residual = optics::eikonal_residual(phase, index, k.omega, k.c);
  const ResidualStats stats = residual_stats(residual, full_mask(grid));
  const double relative = stats.max_abs / (kmag * kmag);
  return verdict(out, "eikonal", relative < c.number("tolerances", "eikonal"),
                 "max |(grad S)^2 - n^2 w^2/c^2| / k^2 = " + sci(relative));
}

int check_hj(const RunConfig& c, std::ostream& out) {
  const double mass = c.constants().mass;
  const double energy = c.number("action", "energy");
  const std::string kind = c.text("action", "potential");
  mechanics::Potential u = kind == "free"      ? mechanics::Potential::zero()
                           : kind == "uniform" ? mechanics::Potential::uniform_force({c.number("action", "force"), 0.0})
                           : kind == "harmonic" ? mechanics::Potential::harmonic(c.number("action", "stiffness"))
                                                : throw ValidationError("action.potential must be free, uniform or harmonic");
  const double x0 = c.number("action", "x0");
  const mechanics::Launch launch{{x0, 0.0}, {1.0, 0.0}};
  double rms[2];
  for (int level = 0; level < 2; ++level) {
    const std::size_t points = (c.count("action", "points") - 1) * (level == 0 ? 1 : 2) + 1;
    const Grid line = Grid::line(x0, c.number("action", "extent"), points);
    const auto surface = mechanics::action_surface_fixed_energy(u, line, std::span(&launch, 1), energy, mass,
                                                                c.number("action", "dt"));
    rms[level] = mechanics::hj_residual_stationary(surface, u, energy, mass).stats.rms;
  }
  const double floor = c.number("tolerances", "hj_floor");
  const double ratio = rms[1] > 0.0 ? rms[0] / rms[1] : INFINITY;
  const bool pass = rms[0] < floor || ratio >= c.number("tolerances", "hj_order");
  return verdict(out, "hj", pass,
                 "residual rms " + sci(rms[0]) + " -> " + sci(rms[1]) + " under refinement (ratio " + fixed(ratio, 3) + ")");
}

int check_norm(const RunConfig& c, std::ostream& out) {
  const Grid grid = wave_grid(c);
  const auto config = wave_propagator(c, grid, c.number("wave", "dt"), false);
  const RealField u = wave_potential(c).sample(grid);
  const std::size_t steps = c.count("wave", "steps");
  const auto result = quantum::propagate(wave_packet(c, grid), u, config, steps, {}, c.count("wave", "norm_stride"));
  const fs::path dir = prepare(c, "check", "norm");
  CsvWriter csv(dir / "norm.csv", {"step", "time", "norm"});
  for (const auto& s : result.norm_history) {
    csv.cell(s.step).cell(s.time).cell(s.norm);
    csv.end_row();
  }
  const auto report = quantum::norm_history_check(result.norm_history);
  const double allowed = c.number("tolerances", "norm_drift") * std::max(1.0, static_cast<double>(steps) / 1000.0);
  return verdict(out, "norm", report.max_drift < allowed,
                 "max |norm - 1| over " + std::to_string(steps) + " steps = " + sci(report.max_drift));
}

int check_continuity(const RunConfig& c, std::ostream& out) {
  double rms[2];
  for (int level = 0; level < 2; ++level) {
    const double refine = level == 0 ? 1.0 : 2.0;
    const Grid grid = wave_grid(c, refine);
    const double dt = c.number("wave", "dt") / refine;
    const auto config = wave_propagator(c, grid, dt, false);
    const RealField u = wave_potential(c).sample(grid);
    quantum::Propagator stepper(u, config);
    // Evaluate at a fixed physical time so both levels see the same packet.
    const std::size_t steps = static_cast<std::size_t>(std::llround(c.number("wave", "dt") * 20.0 / dt));
    std::vector<Complex> state = wave_packet(c, grid).values();
    for (std::size_t s = 0; s + 1 < steps; ++s) stepper.step_in_place(state);
    ComplexField previous(grid, state);
    stepper.step_in_place(state);
    ComplexField current(grid, state);
    stepper.step_in_place(state);
    ComplexField next(grid, state);
    rms[level] = quantum::continuity_residual({previous, current, next, dt}, c.constants()).rms;
  }
  const double ratio = rms[0] / rms[1];
  return verdict(out, "continuity", ratio >= c.number("tolerances", "continuity_order"),
                 "residual rms " + sci(rms[0]) + " -> " + sci(rms[1]) + " with dx, dt halved (ratio " + fixed(ratio, 3) + ")");
}

int check_semiclassical(const RunConfig& c, std::ostream& out) {
  const Grid grid = wave_grid(c);
  const PhysicalConstants base = c.constants();
  const double x0 = c.number("wave", "center_x");
  const double sigma = c.number("wave", "sigma");
  // Smooth amplitude with curvature and a phase carrying momentum.
  const RealField a = RealField::sample(grid, [&](double x, double y) {
    const double r2 = (x - x0) * (x - x0) + (grid.dims() == 2 ? y * y : 0.0);
    return std::exp(-r2 / (4.0 * sigma * sigma));
  });
  const double p = std::max(1.0, c.number("wave", "k0"));
  const RealField s = RealField::sample(grid, [&](double x, double) { return p * x + 0.1 * std::sin(x); });
  const RealField u = wave_potential(c).sample(grid);
  const double energy = 0.5 * p * p / base.mass;
  PhysicalConstants half = base;
  half.hbar *= 0.5;
  const auto r1 = quantum::semiclassical_residuals(a, s, u, energy, base);
  const auto r2 = quantum::semiclassical_residuals(a, s, u, energy, half);
  const double ratio = r1.quantum_norm / r2.quantum_norm;
  const double tol = c.number("tolerances", "semiclassical_scaling");
  const bool pass = std::abs(ratio / 4.0 - 1.0) < tol && r1.hj_norm == r2.hj_norm;
  return verdict(out, "semiclassical", pass,
                 "quantum term ratio under hbar halving " + fixed(ratio, 4) + ", HJ part " + sci(r1.hj_norm) + " vs " +
                     sci(r2.hj_norm));
}

int check_equivariance(const RunConfig& c, std::ostream& out) {
  const Grid grid = wave_grid(c);
  if (grid.dims() != 1) throw ValidationError("check equivariance needs wave.dims = 1");
  const auto config = wave_propagator(c, grid, c.number("wave", "dt"), false);
  pilot::EquivarianceConfig e;
  e.count = c.count("equivariance", "count");
  e.bins = c.count("equivariance", "bins");
  e.steps = c.count("equivariance", "steps");
  e.checkpoints = c.count("equivariance", "checkpoints");
  e.baseline_draws = c.count("equivariance", "baseline_draws");
  e.mass = c.number("equivariance", "mass");
  e.seed = c.seed();
  e.threads = c.threads();
  const auto report =
      pilot::equivariance_test(wave_packet(c, grid), wave_potential(c).sample(grid), config, e);
  const fs::path dir = prepare(c, "check", "equivariance");
  CsvWriter csv(dir / "equivariance.csv", {"t", "tv", "baseline"});
  for (const auto& s : report.samples) {
    csv.cell(s.time).cell(s.tv).cell(s.baseline);
    csv.end_row();
  }
  const double factor = c.number("tolerances", "equivariance_factor");
  double worst = 0.0;
  for (const auto& s : report.samples) worst = std::max(worst, s.tv / s.baseline);
  return verdict(out, "equivariance", report.holds(factor),
                 "max tv / baseline = " + fixed(worst, 4) + " over " + std::to_string(report.samples.size()) +
                     " checkpoints");
}

}  // namespace

int run_snell(const RunConfig& c, std::ostream& out) {
  const std::string law = c.text("snell", "law");
  const double theta1 = c.number("snell", "theta1") * kDegree;
  const fs::path dir = prepare(c, "snell");
  CsvWriter csv(dir / "snell.csv", {"law", "theta1_deg", "theta2_deg", "outcome"});
  csv.cell(law).cell(c.number("snell", "theta1"));
  try {
    double theta2 = 0.0;
    if (law == "wave") {
      theta2 = optics::snell_wave(theta1, c.number("snell", "n1"), c.number("snell", "n2"));
    } else if (law == "corpuscular") {
      theta2 = optics::snell_corpuscular(theta1, c.number("snell", "v1"), c.number("snell", "v2"));
    } else if (law == "reflect") {
      theta2 = optics::reflect(theta1);
    } else {
      throw ValidationError("snell.law must be wave, corpuscular or reflect");
    }
    csv.cell(theta2 / kDegree).cell(std::string(law == "reflect" ? "reflected" : "refracted"));
    csv.end_row();
    out << "theta2 = " << fixed(theta2 / kDegree, 4) << "\xC2\xB0\n";
  } catch (const TotalInternalReflection& e) {
    csv.cell(std::nan("")).cell(std::string("total-internal-reflection"));
    csv.end_row();
    out << "total internal reflection (sin theta2 would be " << fixed(e.sin_theta2(), 6) << ")\n";
  } catch (const NoTransmission& e) {
    csv.cell(std::nan("")).cell(std::string("no-transmission"));
    csv.end_row();
    out << "no transmitted ray (sin theta2 would be " << fixed(e.sin_theta2(), 6) << ")\n";
  }
  return 0;
}

int run_ray_trace(const RunConfig& c, std::ostream& out) {
  const Grid grid = Grid::plane({c.number("ray", "x0"), c.number("ray", "y0")},
                                {c.number("ray", "width"), c.number("ray", "height")}, c.count("ray", "nx"),
                                c.count("ray", "ny"));
  const std::string medium = c.text("ray", "medium");
  optics::IndexDescriptor descriptor;
  if (medium == "two-media") {
    descriptor = optics::TwoMediaIndex{0, c.number("ray", "interface"), c.number("ray", "n1"), c.number("ray", "n2")};
  } else if (medium == "linear") {
    descriptor = optics::LinearGradientIndex{1, c.number("ray", "n0"), c.number("ray", "slope")};
  } else if (medium == "constant") {
    descriptor = optics::ConstantIndex{c.number("ray", "n1")};
  } else {
    throw ValidationError("ray.medium must be two-media, linear or constant");
  }
  const optics::IndexField index(grid, descriptor);
  const double angle = c.number("ray", "angle") * kDegree;
  const optics::Ray start{{c.number("ray", "start_x"), c.number("ray", "start_y")}, {std::cos(angle), std::sin(angle)}};
  const auto path = optics::trace_ray(index, start, c.number("ray", "ds"), c.count("ray", "steps"));
  const fs::path dir = prepare(c, "ray-trace");
  CsvWriter csv(dir / "ray.csv", {"step", "arc_length", "x", "y", "dir_x", "dir_y", "optical_path"});
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const auto& r = path.states[k];
    csv.cell(k).cell(r.arc_length).cell(r.position.x).cell(r.position.y).cell(r.direction.x).cell(r.direction.y).cell(
        r.optical_path);
    csv.end_row();
  }
  const auto& last = path.states.back();
  out << "ray traced over " << path.states.size() - 1 << " steps" << (path.left_domain ? " (reached the boundary)" : "")
      << ", refractions " << path.refractions << ", reflections " << path.reflections << '\n';
  out << "final direction " << fixed(std::atan2(last.direction.y, last.direction.x) / kDegree, 4)
      << " deg from +x, optical path " << fixed(last.optical_path, 6) << '\n';
  if (medium == "two-media") {
    try {
      out << "wave-theory refraction angle " << fixed(optics::snell_wave(angle, c.number("ray", "n1"), c.number("ray", "n2")) / kDegree, 4)
          << " deg\n";
    } catch (const NoTransmission&) {
      out << "wave theory predicts total internal reflection\n";
    }
  }
  return 0;
}

int run_action_surface(const RunConfig& c, std::ostream& out) {
  const double mass = c.constants().mass;
  const std::string kind = c.text("action", "potential");
  const mechanics::Potential u = kind == "free"    ? mechanics::Potential::zero()
                                 : kind == "uniform" ? mechanics::Potential::uniform_force({c.number("action", "force"), 0.0})
                                 : kind == "harmonic"
                                     ? mechanics::Potential::harmonic(c.number("action", "stiffness"))
                                     : throw ValidationError("action.potential must be free, uniform or harmonic");
  const double x0 = c.number("action", "x0");
  const Grid line = Grid::line(x0, c.number("action", "extent"), c.count("action", "points"));
  const std::string mode = c.text("action", "mode");
  const fs::path dir = prepare(c, "action-surface");
  if (mode == "fixed-energy") {
    const double energy = c.number("action", "energy");
    const mechanics::Launch launch{{x0, 0.0}, {1.0, 0.0}};
    const auto surface =
        mechanics::action_surface_fixed_energy(u, line, std::span(&launch, 1), energy, mass, c.number("action", "dt"));
    const auto residual = mechanics::hj_residual_stationary(surface, u, energy, mass);
    const auto momentum = mechanics::momentum_from_action(surface.action);
    CsvWriter csv(dir / "action.csv", {"x", "S", "p", "residual", "valid", "multivalued"});
    for (std::size_t i = 0; i < line.size(); ++i) {
      csv.cell(line.coord(0, i)).cell(surface.action[i]).cell(momentum[0][i]).cell(residual.residual[i]);
      csv.cell(static_cast<int>(surface.valid[i])).cell(static_cast<int>(surface.multivalued[i]));
      csv.end_row();
    }
    out << "fixed-energy action on " << residual.stats.evaluated << " nodes; (grad S)^2 - 2m(E-U): max "
        << sci(residual.stats.max_abs) << ", rms " << sci(residual.stats.rms) << '\n';
    return 0;
  }
  if (mode == "point-source") {
    const auto velocities = c.node("action", "launch_velocities").get<std::vector<double>>();
    const double t = c.number("action", "time");
    const double h = c.number("action", "time_step");
    const std::vector<double> times{t - h, t, t + h};
    const auto surfaces = mechanics::action_surface_point_source(u, line, x0, velocities, times, mass,
                                                                 c.number("action", "dt"));
    const auto residual = mechanics::hj_residual_time_dependent(surfaces[0], surfaces[1], surfaces[2], u, mass);
    CsvWriter csv(dir / "action.csv", {"x", "S", "residual", "valid"});
    for (std::size_t i = 0; i < line.size(); ++i) {
      csv.cell(line.coord(0, i)).cell(surfaces[1].action[i]).cell(residual.residual[i]).cell(
          static_cast<int>(residual.mask[i]));
      csv.end_row();
    }
    out << "point-source action at t = " << fixed(t, 4) << " on " << residual.stats.evaluated
        << " nodes; dS/dt + (grad S)^2/2m + U: max " << sci(residual.stats.max_abs) << ", rms "
        << sci(residual.stats.rms) << '\n';
    return 0;
  }
  throw ValidationError("action.mode must be fixed-energy or point-source");
}

int run_propagate(const RunConfig& c, std::ostream& out) {
  const Grid grid = wave_grid(c);
  const auto config = wave_propagator(c, grid, c.number("wave", "dt"), true);
  const RealField u = wave_potential(c).sample(grid);
  const fs::path dir = prepare(c, "propagate");
  std::vector<quantum::Observer> observers;
  const std::size_t stride = c.count("output", "snapshot_stride");
  if (stride > 0) {
    observers.push_back({stride, [&](std::size_t step, double, const ComplexField& psi) { write_snapshot(dir, step, psi); }});
  }
  const std::size_t steps = c.count("wave", "steps");
  const auto result = quantum::propagate(wave_packet(c, grid), u, config, steps, observers, c.count("wave", "norm_stride"));
  CsvWriter csv(dir / "norm.csv", {"step", "time", "norm"});
  for (const auto& s : result.norm_history) {
    csv.cell(s.step).cell(s.time).cell(s.norm);
    csv.end_row();
  }
  write_field(dir / "psi_final", result.final_state, "psi");
  const auto report = quantum::norm_history_check(result.norm_history);
  out << "propagated " << steps << " steps of dt " << fixed(config.dt, 6) << " on " << grid.describe() << '\n';
  out << "norm: final " << fixed(report.final_norm, 12) << ", max drift " << sci(report.max_drift);
  if (config.absorber) out << ", absorbed " << fixed(report.absorbed_fraction, 6);
  out << '\n';
  return 0;
}

int run_bohm(const RunConfig& c, std::ostream& out) {
  const Grid grid = wave_grid(c);
  const auto config = wave_propagator(c, grid, c.number("wave", "dt"), true);
  const RealField u = wave_potential(c).sample(grid);
  const PhysicalConstants k = c.constants();
  const ComplexField psi0 = wave_packet(c, grid);
  const fs::path dir = prepare(c, "bohm");
  auto ensemble = pilot::sample_from_density(density(psi0), c.count("bohm", "particles"), c.seed(), c.threads());
  pilot::EnsembleAdvancer advancer(std::move(ensemble), c.threads());
  const quantum::Propagator stepper(u, config);
  const std::size_t steps = c.count("wave", "steps");
  const std::size_t record = std::max<std::size_t>(1, c.count("bohm", "record_stride"));
  const bool plane = grid.dims() == 2;
  CsvWriter csv(dir / "trajectories.csv", plane ? std::initializer_list<std::string>{"particle_id", "t", "x", "y"}
                                                : std::initializer_list<std::string>{"particle_id", "t", "x"});
  auto dump = [&]() {
    for (std::size_t n = 0; n < advancer.positions().size(); ++n) {
      if (advancer.exited()[n]) continue;
      csv.cell(n).cell(advancer.time()).cell(advancer.positions()[n].x);
      if (plane) csv.cell(advancer.positions()[n].y);
      csv.end_row();
    }
  };
  dump();
  std::vector<Complex> state = psi0.values();
  pilot::GuidanceField previous(psi0, k);
  for (std::size_t s = 1; s <= steps; ++s) {
    stepper.step_in_place(state);
    pilot::GuidanceField next(ComplexField(grid, state), k);
    advancer.advance(previous, next, config.dt);
    previous = std::move(next);
    if (s % record == 0 || s == steps) dump();
  }
  out << "advanced " << advancer.positions().size() << " particles over " << steps << " steps; left grid "
      << advancer.exit_count() << ", node-flagged " << advancer.flag_count() << ", refined steps "
      << advancer.refined_steps() << '\n';
  return 0;
}

int run_experiment_command(const RunConfig& c, std::ostream& out) {
  const gun::ApparatusSpec spec = apparatus_spec(c);
  const fs::path dir = prepare(c, "experiment", std::to_string(c.integer("apparatus", "experiment")));
  std::vector<quantum::Observer> observers;
  const std::size_t stride = c.count("output", "snapshot_stride");
  if (stride > 0) {
    observers.push_back({stride, [&](std::size_t step, double, const ComplexField& psi) {
                           write_density_pgm(dir / ("density_" + padded(step) + ".pgm"), psi);
                         }});
  }
  const auto result = gun::run_experiment(spec, c.seed(), observers);
  write_histogram(dir / "histogram.csv", result.histogram);
  write_profile(dir / "flux.csv", result.flux.profile);
  out << "experiment " << c.integer("apparatus", "experiment") << " (" << gun::to_string(spec.mode) << "), "
      << result.steps << " steps on " << spec.grid().describe() << '\n';
  describe_profile(out, spec, result);
  return 0;
}

int run_compare_modes(const RunConfig& c, std::ostream& out) {
  const gun::ApparatusSpec spec = apparatus_spec(c);
  const fs::path dir = prepare(c, "compare-modes", std::to_string(c.integer("apparatus", "experiment")));
  const auto cmp = gun::compare_modes(spec, c.seed());
  write_histogram(dir / "histogram_bohm.csv", cmp.bohm.histogram);
  write_histogram(dir / "histogram_copenhagen.csv", cmp.copenhagen);
  write_profile(dir / "flux.csv", cmp.bohm.flux.profile);
  describe_profile(out, spec, cmp.bohm);
  const double factor = c.number("tolerances", "mode_factor");
  return verdict(out, "compare-modes", cmp.tv < factor * cmp.baseline,
                 "TV(Copenhagen, Bohm) = " + fixed(cmp.tv, 5) + ", resampling baseline " + fixed(cmp.baseline, 5) +
                     " at " + std::to_string(cmp.bohm.detections.size()) + " shots");
}

int run_check(const RunConfig& c, const std::string& kind, std::ostream& out) {
  if (kind == "eikonal") return prepare(c, "check", kind), check_eikonal(c, out);
  if (kind == "hj") return prepare(c, "check", kind), check_hj(c, out);
  if (kind == "norm") return check_norm(c, out);
  if (kind == "continuity") return prepare(c, "check", kind), check_continuity(c, out);
  if (kind == "semiclassical") return prepare(c, "check", kind), check_semiclassical(c, out);
  if (kind == "equivariance") return check_equivariance(c, out);
  throw ValidationError("unknown check '" + kind + "'");
}

}  // namespace wavelab::cli
