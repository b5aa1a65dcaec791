#include "wavelab/pilot/guidance.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/core/calculus.hpp"

namespace wavelab::pilot {

namespace {

struct Stencil {
  std::size_t k[4];
  double w[4];
  int count;
};

void locate(const Grid& g, int axis, double x, std::size_t& i, double& t) {
  const std::size_t n = g.points(axis);
  double s = (x - g.origin(axis)) / g.spacing(axis);
  s = std::clamp(s, 0.0, static_cast<double>(n - 1));
  i = std::min(static_cast<std::size_t>(s), n - 2);
  t = s - static_cast<double>(i);
}

Stencil stencil(const Grid& g, Vec2 p) {
  std::size_t i;
  double tx;
  locate(g, 0, p.x, i, tx);
  if (g.dims() == 1) return {{i, i + 1, 0, 0}, {1.0 - tx, tx, 0, 0}, 2};
  std::size_t j;
  double ty;
  locate(g, 1, p.y, j, ty);
  const std::size_t k = g.index(i, j);
  const std::size_t nx = g.nx();
  return {{k, k + 1, k + nx, k + nx + 1},
          {(1.0 - tx) * (1.0 - ty), tx * (1.0 - ty), (1.0 - tx) * ty, tx * ty},
          4};
}

double blend(const Stencil& s, const std::vector<double>& f) {
  double v = 0.0;
  for (int m = 0; m < s.count; ++m) v += s.w[m] * f[s.k[m]];
  return v;
}

}  // namespace

GuidanceField::GuidanceField(const ComplexField& psi, const PhysicalConstants& constants)
    : psi_(psi), hbar_over_m_(constants.hbar / constants.mass) {
  constants.validate();
  const auto grad = gradient(psi_);
  const std::size_t n = psi_.size();
  rho_.resize(n);
  current_.assign(grad.size(), std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    rho_[k] = std::norm(psi_[k]);
    max_density_ = std::max(max_density_, rho_[k]);
    const Complex zc = std::conj(psi_[k]);
    for (std::size_t a = 0; a < grad.size(); ++a) current_[a][k] = hbar_over_m_ * std::imag(zc * grad[a][k]);
  }
}

double GuidanceField::relative_density(Vec2 p) const {
  if (max_density_ <= 0.0) return 0.0;
  return blend(stencil(grid(), p), rho_) / max_density_;
}

bool GuidanceField::try_velocity(Vec2 p, Vec2& v, double& relative) const {
  const Stencil s = stencil(grid(), p);
  const double rho = blend(s, rho_);
  relative = max_density_ > 0.0 ? rho / max_density_ : 0.0;
  if (!(relative >= kNodeFloor) || rho <= 0.0) return false;
  v.x = blend(s, current_[0]) / rho;
  v.y = current_.size() > 1 ? blend(s, current_[1]) / rho : 0.0;
  return true;
}

Vec2 GuidanceField::velocity(Vec2 p) const {
  Vec2 v;
  double relative = 0.0;
  if (!try_velocity(p, v, relative)) throw NodeRegionError("guidance velocity requested inside a node region");
  return v;
}

Vec2 GuidanceField::node_velocity(std::size_t k) const {
  const double rho = rho_.at(k);
  if (!(rho >= kNodeFloor * max_density_) || rho <= 0.0) {
    throw NodeRegionError("guidance velocity requested at a node of psi");
  }
  return {current_[0][k] / rho, current_.size() > 1 ? current_[1][k] / rho : 0.0};
}

Vec2 guidance_velocity(const ComplexField& psi, Vec2 point, const PhysicalConstants& constants) {
  return GuidanceField(psi, constants).velocity(point);
}

}  // namespace wavelab::pilot
