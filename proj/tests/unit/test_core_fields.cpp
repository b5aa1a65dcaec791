#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "wavelab/core/calculus.hpp"
#include "wavelab/core/error.hpp"
#include "wavelab/core/family.hpp"
#include "wavelab/core/field_io.hpp"
#include "wavelab/core/parallel.hpp"
#include "wavelab/core/rng.hpp"

using namespace wavelab;
namespace fs = std::filesystem;

namespace {

double max_interior_error(const RealField& f, const std::function<double(double, double)>& exact) {
  const Grid& g = f.grid();
  double worst = 0.0;
  for (std::size_t j = (g.dims() == 2 ? 1 : 0); j < (g.dims() == 2 ? g.ny() - 1 : 1); ++j) {
    for (std::size_t i = 1; i + 1 < g.nx(); ++i) {
      const Vec2 p = g.position(g.index(i, j));
      worst = std::max(worst, std::abs(f.at(i, j) - exact(p.x, p.y)));
    }
  }
  return worst;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wavelab_core_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid line = Grid::line(-1.0, 2.0, 21);
  CHECK(line.dims() == 1);
  CHECK(line.size() == 21);
  CHECK(line.spacing(0) == doctest::Approx(0.1));
  CHECK(line.coord(0, 20) == doctest::Approx(1.0));

  const Grid plane = Grid::plane({0.0, -2.5}, {10.0, 5.0}, 11, 9);
  CHECK(plane.index(3, 2) == 2 * 11 + 3);
  const Vec2 p = plane.position(plane.index(3, 2));
  CHECK(p.x == doctest::Approx(3.0));
  CHECK(p.y == doctest::Approx(-2.5 + 2 * 0.625));
  CHECK(plane.contains({10.0, 2.5}));
  CHECK_FALSE(plane.contains({10.01, 0.0}));

  CHECK_THROWS_AS(Grid::line(0.0, 1.0, 4), GridError);
  CHECK_THROWS_AS(Grid::line(0.0, -1.0, 16), GridError);
  CHECK_THROWS_AS(require_same_grid(line, Grid::line(-1.0, 2.0, 22), "test"), GridError);
}

TEST_CASE("fields reject bad input") {
  const Grid g = Grid::line(0.0, 1.0, 16);
  CHECK_THROWS_AS(RealField(g, std::vector<double>(15, 0.0)), GridError);
  std::vector<double> v(16, 0.0);
  v[3] = NAN;
  CHECK_THROWS_AS(RealField(g, v), ValidationError);
  const RealField f = RealField::sample(g, [](double x, double) { return 2.0 * x; });
  CHECK(f.at(15) == doctest::Approx(2.0));
  CHECK(f.map([](double a) { return a * a; })[15] == doctest::Approx(4.0));
}

TEST_CASE("central differences converge at second order") {
  double errors[2];
  for (int level = 0; level < 2; ++level) {
    const Grid g = Grid::plane({0.0, 0.0}, {2.0, 1.0}, 41 * (level + 1) - level, 21 * (level + 1) - level);
    const RealField f = RealField::sample(g, [](double x, double y) { return std::sin(2.0 * x) * std::cos(3.0 * y); });
    const auto grad = gradient(f);
    const RealField lap = laplacian(f);
    errors[level] = std::max(
        max_interior_error(grad[0], [](double x, double y) { return 2.0 * std::cos(2.0 * x) * std::cos(3.0 * y); }),
        max_interior_error(lap, [](double x, double y) { return -13.0 * std::sin(2.0 * x) * std::cos(3.0 * y); }));
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("one-sided boundary stencils are exact on quadratics") {
  const Grid g = Grid::line(0.0, 1.0, 11);
  const RealField f = RealField::sample(g, [](double x, double) { return 3.0 * x * x - x + 2.0; });
  const RealField d = partial(f, 0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(d[i] == doctest::Approx(6.0 * g.coord(0, i) - 1.0).epsilon(1e-12));
  const RealField l = laplacian(f);
  CHECK(l[0] == doctest::Approx(6.0));
  CHECK(l[10] == doctest::Approx(6.0));
}

TEST_CASE("divergence of a linear field") {
  const Grid g = Grid::plane({-1.0, -1.0}, {2.0, 2.0}, 17, 17);
  const std::vector<RealField> v{RealField::sample(g, [](double x, double) { return 2.0 * x; }),
                                 RealField::sample(g, [](double, double y) { return -0.5 * y; })};
  const RealField div = divergence(v);
  for (double d : div.values()) CHECK(d == doctest::Approx(1.5));
}

TEST_CASE("time derivatives from snapshot triples") {
  const Grid g = Grid::line(0.0, 1.0, 16);
  const double dt = 1e-3;
  auto at = [&](double t) { return RealField::sample(g, [t](double x, double) { return x * t * t; }); };
  const RealField d = time_derivative({at(1.0 - dt), at(1.0), at(1.0 + dt), dt});
  CHECK(d.at(15) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("quadrature and compensated sums") {
  const Grid g = Grid::line(-10.0, 20.0, 401);
  const RealField f = RealField::sample(g, [](double x, double) { return std::exp(-x * x / 2.0); });
  CHECK(integrate(f) == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));

  std::vector<double> v{1.0, 1e100, 1.0, -1e100};
  CHECK(compensated_sum(v) == 2.0);
}

TEST_CASE("gaussian packet is normalized and guarded") {
  const Grid g = Grid::plane({-20.0, -20.0}, {40.0, 40.0}, 101, 101);
  const ComplexField psi = gaussian_packet(g, {1.0, -0.5}, 1.5, {2.0, 0.0});
  CHECK(norm_squared_integral(psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_packet(g, {0.0, 0.0}, 1.0, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(gaussian_packet(g, {15.0, 0.0}, 1.5, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(normalize(ComplexField(g)), NormalizationError);
}

TEST_CASE("amplitude and phase round trip with unwrapping") {
  const Grid g = Grid::plane({-5.0, -5.0}, {10.0, 10.0}, 81, 81);
  const RealField a = RealField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 8.0); });
  const RealField s = RealField::sample(g, [](double x, double y) { return 3.0 * x + 0.5 * y * y; });
  const double hbar = 0.7;
  const ComplexField psi = amplitude_phase_compose(a, s, hbar);
  const auto ap = amplitude_phase_decompose(psi, hbar);
  const std::size_t centre = g.index(40, 40);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    REQUIRE(ap.mask[k] == 1);
    worst = std::max(worst, std::abs(ap.amplitude[k] - a[k]));
    // phases agree up to the constant fixed at the seed node
    worst = std::max(worst, std::abs((ap.phase[k] - ap.phase[centre]) - (s[k] - s[centre])));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("interpolation is exact on bilinear functions") {
  const Grid g = Grid::plane({0.0, 0.0}, {1.0, 2.0}, 11, 21);
  const RealField f = RealField::sample(g, [](double x, double y) { return 1.0 + 2.0 * x - y + 3.0 * x * y; });
  CHECK(interpolate(f, {0.33, 1.27}) == doctest::Approx(1.0 + 0.66 - 1.27 + 3.0 * 0.33 * 1.27));
  CHECK(interpolate(f, {5.0, 0.0}) == doctest::Approx(f.at(10, 0)));
}

TEST_CASE("erosion and residual statistics") {
  const Grid g = Grid::line(0.0, 1.0, 20);
  const Mask m = erode(g, full_mask(g), 2);
  CHECK(m[0] == 0);
  CHECK(m[1] == 0);
  CHECK(m[2] == 1);
  CHECK(m[17] == 1);
  CHECK(m[18] == 0);
  const RealField r = RealField::sample(g, [](double, double) { return -2.0; });
  const ResidualStats st = residual_stats(r, m);
  CHECK(st.max_abs == 2.0);
  CHECK(st.rms == doctest::Approx(2.0));
  CHECK(st.evaluated == 16);
  CHECK(st.masked_fraction == doctest::Approx(0.2));
}

TEST_CASE("field files round trip bit for bit") {
  const fs::path dir = scratch_dir("io");
  const Grid g = Grid::plane({0.0, -2.5}, {10.0, 5.0}, 17, 9);
  const ComplexField psi = gaussian_packet(Grid::plane({-6, -6}, {12, 12}, 81, 81), {0, 0}, 0.6, {1.0, 0.5});
  write_field(dir / "psi", psi, "psi");
  const ComplexField back = read_complex_field(dir / "psi");
  CHECK(back.grid() == psi.grid());
  CHECK(back.values() == psi.values());
  const auto header = read_field_header(dir / "psi");
  CHECK(header.kind == "complex");
  CHECK(header.role == "psi");
  CHECK(fs::file_size(dir / "psi.bin") == psi.size() * 16);

  const RealField f = RealField::sample(g, [](double x, double y) { return x / 3.0 + y; });
  write_field(dir / "f", f, "density");
  CHECK(read_real_field(dir / "f").values() == f.values());
  CHECK_THROWS(read_complex_field(dir / "f"));
}

TEST_CASE("pgm snapshot") {
  const fs::path dir = scratch_dir("pgm");
  const Grid g = Grid::plane({-8, -6}, {16, 12}, 81, 61);
  write_density_pgm(dir / "d.pgm", gaussian_packet(g, {0, 0}, 0.65, {0, 0}));
  std::ifstream in(dir / "d.pgm", std::ios::binary);
  std::string magic;
  std::size_t w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  CHECK(magic == "P5");
  CHECK(w == 81);
  CHECK(h == 61);
  CHECK(maxval == 255);
  CHECK(fs::file_size(dir / "d.pgm") > 81 * 61);
}

TEST_CASE("random streams are reproducible and independent") {
  RandomStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.bits();
    CHECK(x == b.bits());
    seen.insert(x);
    seen.insert(c.bits());
    seen.insert(d.bits());
  }
  CHECK(seen.size() == 300);

  RandomStream u(1, 0);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
    sum2 += x * x;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sum2 / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("parallel_for covers the range exactly once") {
  for (int threads : {1, 3, 8}) {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) ++hits[k];
    });
    for (int h : hits) REQUIRE(h == 1);
  }
}

TEST_CASE("family transfer reproduces smooth data") {
  const Grid line = Grid::line(0.0, 2.0, 41);
  std::vector<double> xs, ys;
  for (int k = 0; k <= 30; ++k) {
    const double x = -0.1 + 2.2 * k / 30.0 + 0.01 * std::sin(k);
    xs.push_back(x);
    ys.push_back(x * x * x - x);
  }
  const auto out = scattered_to_line(line, xs, ys);
  for (std::size_t i = 0; i < line.size(); ++i) {
    REQUIRE(out.valid[i] == 1);
    const double x = line.coord(0, i);
    CHECK(out.values[i] == doctest::Approx(x * x * x - x).epsilon(1e-10));
  }

  // A single member carried along a line: Hermite transfer of value = tau^2
  FamilyMember member;
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.25 * k;
    member.push_back({t, {t, 0.0}, {1.0, 0.0}, t * t, 2.0 * t});
  }
  const auto f = assemble_family(line, std::span(&member, 1));
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (!f.valid[i]) continue;
    const double x = line.coord(0, i);
    CHECK(f.values[i] == doctest::Approx(x * x).epsilon(1e-12));
  }
}
