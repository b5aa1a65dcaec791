#include "wavelab/optics/ray_tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavelab/core/error.hpp"

namespace wavelab::optics {

namespace {

constexpr double kJumpThreshold = 0.10;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec2 unit(Vec2 v) { return v / norm(v); }

struct Tracer {
  const IndexField& n;
  const Grid& grid;
  RayPath& path;

  bool inside(Vec2 p) const {
    const double mx = 2.0 * grid.spacing(0);
    const double my = 2.0 * grid.spacing(1);
    return p.x >= grid.origin(0) + mx && p.x <= grid.upper(0) - mx && p.y >= grid.origin(1) + my &&
           p.y <= grid.upper(1) - my;
  }

  void turn(Vec2& u, Vec2 normal, double n1, double n2) {
    Vec2 out;
    if (refract(u, normal, n1, n2, out)) {
      ++path.refractions;
    } else {
      ++path.reflections;
    }
    u = out;
  }

  // Straight motion through a two-media descriptor, refracting at its plane.
  void straight_two_media(const TwoMediaIndex& media, Ray& ray, double length) {
    Vec2 u = ray.direction;
    double remaining = length;
    const Vec2 normal = media.axis == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    for (int guard = 0; guard < 8 && remaining > 0.0; ++guard) {
      const double coord = media.axis == 0 ? ray.position.x : ray.position.y;
      const double speed = media.axis == 0 ? u.x : u.y;
      double t = kInf;
      if (speed != 0.0) {
        // a ray that stopped exactly on the plane still has to cross it
        const double cand = (media.position - coord) / speed;
        if (cand > -1e-13) t = std::max(cand, 0.0);
      }
      // index of the stretch actually travelled (the side it came from when t = 0)
      const double n_here = n.value(t > 0.0 ? ray.position + 0.5 * std::min(t, remaining) * u : ray.position - 1e-9 * u);
      if (t >= remaining) {
        ray.position += remaining * u;
        ray.optical_path += n_here * remaining;
        remaining = 0.0;
        break;
      }
      ray.position += t * u;
      ray.optical_path += n_here * t;
      remaining -= t;
      const double n_next = n.value(ray.position + 1e-9 * u);
      turn(u, normal, n_here, n_next);
      // step off the plane so it is not found again
      const double nudge = std::min(1e-10, remaining);
      ray.position += nudge * u;
      ray.optical_path += n.value(ray.position) * nudge;
      remaining -= nudge;
    }
    ray.direction = u;
  }

  // Straight motion through nearest-node cells of the sampled field.
  void straight_cells(Ray& ray, double length) {
    const double hx = grid.spacing(0);
    const double hy = grid.spacing(1);
    auto cell_of = [&](Vec2 p) {
      return std::pair<long, long>{std::lround((p.x - grid.origin(0)) / hx),
                                   std::lround((p.y - grid.origin(1)) / hy)};
    };
    auto value = [&](long i, long j) {
      i = std::clamp<long>(i, 0, static_cast<long>(grid.nx()) - 1);
      j = std::clamp<long>(j, 0, static_cast<long>(grid.ny()) - 1);
      return n.field().at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    auto [ci, cj] = cell_of(ray.position);
    Vec2 u = ray.direction;
    double remaining = length;
    for (int guard = 0; guard < 1000 && remaining > 0.0; ++guard) {
      const double face_x = grid.origin(0) + (static_cast<double>(ci) + (u.x > 0 ? 0.5 : -0.5)) * hx;
      const double face_y = grid.origin(1) + (static_cast<double>(cj) + (u.y > 0 ? 0.5 : -0.5)) * hy;
      const double tx = u.x != 0.0 ? std::max(0.0, (face_x - ray.position.x) / u.x) : kInf;
      const double ty = u.y != 0.0 ? std::max(0.0, (face_y - ray.position.y) / u.y) : kInf;
      const double t = std::min(tx, ty);
      const double n_here = value(ci, cj);
      if (t >= remaining) {
        ray.position += remaining * u;
        ray.optical_path += n_here * remaining;
        break;
      }
      ray.position += t * u;
      ray.optical_path += n_here * t;
      remaining -= t;
      const bool x_face = tx <= ty;
      const long ni = x_face ? ci + (u.x > 0 ? 1 : -1) : ci;
      const long nj = x_face ? cj : cj + (u.y > 0 ? 1 : -1);
      const double n_next = value(ni, nj);
      if (n_next != n_here) {
        const Vec2 normal = x_face ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        Vec2 out;
        const bool transmitted = refract(u, normal, n_here, n_next, out);
        u = out;
        if (transmitted) {
          ++path.refractions;
          ci = ni;
          cj = nj;
        } else {
          ++path.reflections;
        }
      } else {
        ci = ni;
        cj = nj;
      }
    }
    ray.direction = u;
  }

  bool has_jump(Vec2 a, Vec2 b) const {
    double lo = kInf;
    double hi = 0.0;
    for (Vec2 p : {a, b}) {
      const double fx = (p.x - grid.origin(0)) / grid.spacing(0);
      const double fy = (p.y - grid.origin(1)) / grid.spacing(1);
      const long i0 = static_cast<long>(std::floor(fx)) - 1;
      const long j0 = static_cast<long>(std::floor(fy)) - 1;
      for (long i = i0; i <= i0 + 3; ++i) {
        for (long j = j0; j <= j0 + 3; ++j) {
          if (i < 0 || j < 0 || i >= static_cast<long>(grid.nx()) || j >= static_cast<long>(grid.ny())) continue;
          const double v = n.field().at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    return hi > (1.0 + kJumpThreshold) * lo;
  }

  // One RK4 step of r' = p / n, p' = grad n, L' = n, with |p| reset to n.
  void smooth_step(Ray& ray, double ds) {
    struct State {
      Vec2 r, p;
      double opl;
    };
    auto rhs = [&](const State& s) {
      const double nv = n.value(s.r);
      return State{s.p / nv, n.gradient(s.r), nv};
    };
    auto axpy = [](const State& s, double h, const State& d) {
      return State{s.r + h * d.r, s.p + h * d.p, s.opl + h * d.opl};
    };
    const State s0{ray.position, n.value(ray.position) * ray.direction, ray.optical_path};
    const State k1 = rhs(s0);
    const State k2 = rhs(axpy(s0, 0.5 * ds, k1));
    const State k3 = rhs(axpy(s0, 0.5 * ds, k2));
    const State k4 = rhs(axpy(s0, ds, k3));
    State s1{s0.r + (ds / 6.0) * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
             s0.p + (ds / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p),
             s0.opl + (ds / 6.0) * (k1.opl + 2.0 * k2.opl + 2.0 * k3.opl + k4.opl)};
    ray.position = s1.r;
    ray.direction = unit(s1.p);
    ray.optical_path = s1.opl;
  }
};

}  // namespace

bool refract(Vec2 u, Vec2 normal, double n1, double n2, Vec2& out) {
  Vec2 nrm = unit(normal);
  double cos_i = dot(u, nrm);
  if (cos_i < 0.0) {
    nrm = -nrm;
    cos_i = -cos_i;
  }
  const double eta = n1 / n2;
  const double sin_t2 = eta * eta * (1.0 - cos_i * cos_i);
  if (sin_t2 > 1.0) {
    out = unit(u - 2.0 * cos_i * nrm);
    return false;
  }
  const double cos_t = std::sqrt(1.0 - sin_t2);
  out = unit(eta * u + (cos_t - eta * cos_i) * nrm);
  return true;
}

RayPath trace_ray(const IndexField& n, const Ray& start, double ds, std::size_t n_steps) {
  const Grid& grid = n.grid();
  if (grid.dims() != 2) throw ValidationError("ray tracing needs a 2D index field");
  if (!(ds > 0.0)) throw ValidationError("ray step must be positive");
  const double dnorm = norm(start.direction);
  if (!(dnorm > 0.0)) throw ValidationError("ray direction must be non-zero");

  RayPath path;
  Tracer tracer{n, grid, path};
  Ray ray = start;
  ray.direction = start.direction / dnorm;
  if (!tracer.inside(ray.position)) {
    path.left_domain = true;
    return path;
  }
  path.states.reserve(n_steps + 1);
  path.states.push_back(ray);

  const auto& desc = n.descriptor();
  for (std::size_t step = 0; step < n_steps; ++step) {
    Ray next = ray;
    if (desc && std::holds_alternative<ConstantIndex>(*desc)) {
      next.position += ds * ray.direction;
      next.optical_path += std::get<ConstantIndex>(*desc).n * ds;
    } else if (desc && std::holds_alternative<TwoMediaIndex>(*desc)) {
      tracer.straight_two_media(std::get<TwoMediaIndex>(*desc), next, ds);
    } else if (!desc && tracer.has_jump(ray.position, ray.position + ds * ray.direction)) {
      tracer.straight_cells(next, ds);
    } else {
      tracer.smooth_step(next, ds);
    }
    next.arc_length = ray.arc_length + ds;
    if (!tracer.inside(next.position)) {
      path.left_domain = true;
      break;
    }
    ray = next;
    path.states.push_back(ray);
  }
  return path;
}

}  // namespace wavelab::optics
