#include "wavelab/pilot/ensemble.hpp"

#include <algorithm>
#include <numeric>

#include "wavelab/core/parallel.hpp"

namespace wavelab::pilot {

namespace {

enum class StepOutcome { Done, Refine, Node, Exit };

struct Blend {
  const GuidanceField& from;
  const GuidanceField& to;

  // Velocity at fraction s of the interval; false in a node region.
  bool operator()(Vec2 p, double s, Vec2& v, double& relative) const {
    Vec2 a, b;
    double ra = 0.0, rb = 0.0;
    if (!from.try_velocity(p, a, ra) || !to.try_velocity(p, b, rb)) {
      relative = std::min(ra, rb);
      return false;
    }
    v = (1.0 - s) * a + s * b;
    relative = std::min(ra, rb);
    return true;
  }
};

// Stage velocities that change faster than this (|dv/dx| dt) mean the map
// could fold neighbouring particles past each other.
constexpr double kStiffLimit = 0.5;
constexpr int kMaxDepth = 2;

StepOutcome rk4(const Blend& field, const Grid& grid, Vec2& p, double s0, double ds, double dt,
                double refine_below, bool check_stiff) {
  Vec2 k[4];
  const Vec2 start = p;
  const double offsets[4] = {0.0, 0.5, 0.5, 1.0};
  Vec2 q = start;
  double stiff = 0.0;
  for (int stage = 0; stage < 4; ++stage) {
    if (stage > 0) q = start + (offsets[stage] * dt) * k[stage - 1];
    if (!grid.contains(q)) return StepOutcome::Exit;
    double relative = 0.0;
    if (!field(q, s0 + offsets[stage] * ds, k[stage], relative)) return StepOutcome::Node;
    if (relative < refine_below) return StepOutcome::Refine;
    if (stage > 0) {
      const double moved = offsets[stage] * dt * norm(k[stage - 1]);
      if (moved > 1e-14) stiff = std::max(stiff, dt * norm(k[stage] - k[0]) / moved);
    }
  }
  if (check_stiff && stiff > kStiffLimit) return StepOutcome::Refine;
  const Vec2 end = start + (dt / 6.0) * (k[0] + 2.0 * k[1] + 2.0 * k[2] + k[3]);
  if (!grid.contains(end)) return StepOutcome::Exit;
  p = end;
  return StepOutcome::Done;
}

// One step over [s0, s0 + ds] of the snapshot interval; splits into
// kNodeSubsteps (and once more) where the field is steep or nearly empty.
StepOutcome advance_one(const Blend& field, const Grid& grid, Vec2& p, double s0, double ds, double dt, int depth,
                        bool& refined) {
  const Vec2 start = p;
  const StepOutcome outcome =
      rk4(field, grid, p, s0, ds, dt, depth == 0 ? kRefineThreshold : 0.0, depth < kMaxDepth);
  if ((outcome != StepOutcome::Refine && outcome != StepOutcome::Node) || depth == kMaxDepth) return outcome;
  refined = true;
  p = start;
  const double h = dt / kNodeSubsteps;
  const double sub = ds / kNodeSubsteps;
  for (int k = 0; k < kNodeSubsteps; ++k) {
    const StepOutcome o = advance_one(field, grid, p, s0 + k * sub, sub, h, depth + 1, refined);
    if (o != StepOutcome::Done) return o == StepOutcome::Refine ? StepOutcome::Node : o;
  }
  return StepOutcome::Done;
}

}  // namespace

EnsembleAdvancer::EnsembleAdvancer(ParticleEnsemble ensemble, int threads)
    : ensemble_(std::move(ensemble)),
      exited_(ensemble_.positions.size(), 0),
      flagged_(ensemble_.positions.size(), 0),
      refined_flag_(ensemble_.positions.size(), 0),
      threads_(threads),
      time_(ensemble_.birth_time) {}

void EnsembleAdvancer::advance(const GuidanceField& from, const GuidanceField& to, double dt) {
  require_same_grid(from.grid(), to.grid(), "EnsembleAdvancer::advance");
  const Grid& grid = from.grid();
  const Blend field{from, to};
  auto& positions = ensemble_.positions;
  std::fill(refined_flag_.begin(), refined_flag_.end(), 0);
  parallel_for(positions.size(), threads_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) {
      if (exited_[n]) continue;
      Vec2 p = positions[n];
      bool refined = false;
      const StepOutcome outcome = advance_one(field, grid, p, 0.0, 1.0, dt, 0, refined);
      refined_flag_[n] = refined;
      if (outcome == StepOutcome::Node) {
        flagged_[n] = 1;
        continue;
      }
      if (outcome == StepOutcome::Exit) {
        exited_[n] = 1;
        continue;
      }
      positions[n] = p;
    }
  });
  refined_ += static_cast<std::size_t>(std::count(refined_flag_.begin(), refined_flag_.end(), 1));
  time_ += dt;
}

std::size_t EnsembleAdvancer::exit_count() const {
  return static_cast<std::size_t>(std::count(exited_.begin(), exited_.end(), 1));
}

std::size_t EnsembleAdvancer::flag_count() const {
  return static_cast<std::size_t>(std::count(flagged_.begin(), flagged_.end(), 1));
}

void EnsembleAdvancer::remove(std::size_t particle) { exited_.at(particle) = 1; }

double TrajectoryRecord::loss_fraction() const {
  return exited.empty() ? 0.0 : static_cast<double>(exit_count) / static_cast<double>(exited.size());
}

std::vector<Vec2> TrajectoryRecord::survivors() const {
  std::vector<Vec2> out;
  if (positions.empty()) return out;
  for (std::size_t n = 0; n < exited.size(); ++n) {
    if (!exited[n]) out.push_back(positions.back()[n]);
  }
  return out;
}

TrajectoryRecord advance_ensemble(const ParticleEnsemble& ensemble, std::span<const ComplexField> stream, double dt,
                                  const PhysicalConstants& constants, int threads) {
  if (!(dt > 0.0)) throw ValidationError("ensemble dt must be positive");
  TrajectoryRecord record;
  record.exited.assign(ensemble.positions.size(), 0);
  record.flagged.assign(ensemble.positions.size(), 0);
  if (stream.empty()) return record;
  for (const Vec2& p : ensemble.positions) {
    if (!stream.front().grid().contains(p)) throw DomainError("particle starts outside the grid");
  }
  EnsembleAdvancer advancer(ensemble, threads);
  record.times.push_back(advancer.time());
  record.positions.push_back(advancer.positions());
  GuidanceField previous(stream.front(), constants);
  for (std::size_t k = 1; k < stream.size(); ++k) {
    GuidanceField next(stream[k], constants);
    advancer.advance(previous, next, dt);
    record.times.push_back(advancer.time());
    record.positions.push_back(advancer.positions());
    previous = std::move(next);
  }
  record.exited = advancer.exited();
  record.flagged = advancer.flagged();
  record.exit_count = advancer.exit_count();
  record.flag_count = advancer.flag_count();
  return record;
}

}  // namespace wavelab::pilot
