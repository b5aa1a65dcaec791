#pragma once

#include <ostream>
#include <string>

#include "wavelab/cli/config.hpp"

namespace wavelab::cli {

// Each command writes its data files and manifest.json into the output
// directory and a short summary to `out`. The return value is the exit code:
// 0 on success, 1 when a check fails. Errors propagate as exceptions.

int run_snell(const RunConfig& config, std::ostream& out);
int run_ray_trace(const RunConfig& config, std::ostream& out);
int run_action_surface(const RunConfig& config, std::ostream& out);
int run_propagate(const RunConfig& config, std::ostream& out);
int run_bohm(const RunConfig& config, std::ostream& out);
int run_experiment_command(const RunConfig& config, std::ostream& out);
int run_compare_modes(const RunConfig& config, std::ostream& out);

/// kind: eikonal, hj, norm, continuity, semiclassical or equivariance.
int run_check(const RunConfig& config, const std::string& kind, std::ostream& out);

}  // namespace wavelab::cli
