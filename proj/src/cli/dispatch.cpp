#include "wavelab/cli/dispatch.hpp"

#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "wavelab/cli/commands.hpp"
#include "wavelab/cli/config.hpp"
#include "wavelab/core/error.hpp"

namespace wavelab::cli {

namespace {

// A command-line flag that overrides one config key when given.
struct Binding {
  std::string section;
  std::string key;
  std::function<std::optional<Json>()> value;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output_dir;
};

class Bindings {
 public:
  template <typename T>
  void add(CLI::App* app, const std::string& flag, const std::string& section, const std::string& key,
           const std::string& help) {
    auto slot = std::make_shared<std::optional<T>>();
    app->add_option(flag, *slot, help);
    entries_[app].push_back({section, key, [slot]() -> std::optional<Json> {
                               if (!*slot) return std::nullopt;
                               return Json(**slot);
                             }});
  }

  void apply(CLI::App* app, RunConfig& config) const {
    const auto it = entries_.find(app);
    if (it == entries_.end()) return;
    for (const auto& b : it->second) {
      if (auto v = b.value()) config.set(b.section, b.key, *v);
    }
  }

 private:
  std::map<CLI::App*, std::vector<Binding>> entries_;
};

void add_common(CLI::App* app, Common& common) {
  app->add_option("--config", common.config, "JSON config or manifest file")->check(CLI::ExistingFile);
  app->add_option("--seed", common.seed, "random seed");
  app->add_option("--threads", common.threads, "worker threads (default 1)")->check(CLI::PositiveNumber);
  app->add_option("--output-dir", common.output_dir, "directory for data files");
}

void add_wave(CLI::App* app, Bindings& b) {
  b.add<long long>(app, "--dims", "wave", "dims", "1 or 2");
  b.add<long long>(app, "--points", "wave", "points", "grid points along x");
  b.add<long long>(app, "--ny", "wave", "ny", "grid points along y");
  b.add<double>(app, "--extent", "wave", "extent", "domain length along x");
  b.add<double>(app, "--dt", "wave", "dt", "time step");
  b.add<long long>(app, "--steps", "wave", "steps", "number of steps");
  b.add<double>(app, "--sigma", "wave", "sigma", "packet width");
  b.add<double>(app, "--k0", "wave", "k0", "packet wavenumber");
  b.add<std::string>(app, "--potential", "wave", "potential", "free or harmonic");
  b.add<long long>(app, "--absorber-width", "wave", "absorber_width", "absorbing layer width in cells");
  b.add<double>(app, "--absorber-strength", "wave", "absorber_strength", "absorbing layer strength");
}

void add_apparatus(CLI::App* app, Bindings& b) {
  b.add<std::string>(app, "--mode", "apparatus", "mode", "copenhagen or bohm");
  b.add<long long>(app, "--shots", "apparatus", "shots", "number of detections");
  b.add<long long>(app, "--bins", "apparatus", "bins", "screen histogram bins");
  b.add<double>(app, "--slit-width", "apparatus", "slit_width", "slit width (0 = experiment default)");
  b.add<double>(app, "--slit-separation", "apparatus", "slit_separation", "slit separation (0 = default)");
  b.add<double>(app, "--dt", "apparatus", "dt", "time step");
  b.add<double>(app, "--duration", "apparatus", "duration", "run length");
  b.add<long long>(app, "--nx", "apparatus", "nx", "grid points along x");
  b.add<long long>(app, "--ny", "apparatus", "ny", "grid points along y");
}

int fail(std::ostream& err, const std::string& message, int code) {
  err << "error: " << message << '\n';
  return code;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wave optics, Hamilton-Jacobi mechanics, Schrodinger dynamics and pilot-wave simulations", "wavelab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;
  Bindings bindings;

  auto* snell = app.add_subcommand("snell", "Refraction angle from the wave or corpuscular law. Writes snell.csv.");
  bindings.add<double>(snell, "--theta1", "snell", "theta1", "incidence angle in degrees");
  bindings.add<double>(snell, "--n1", "snell", "n1", "index of the incident medium");
  bindings.add<double>(snell, "--n2", "snell", "n2", "index of the second medium");
  bindings.add<double>(snell, "--v1", "snell", "v1", "particle speed in medium 1");
  bindings.add<double>(snell, "--v2", "snell", "v2", "particle speed in medium 2");
  bindings.add<std::string>(snell, "--law", "snell", "law", "wave, corpuscular or reflect");

  auto* ray = app.add_subcommand("ray-trace", "Trace a ray through an index field. Writes ray.csv.");
  bindings.add<std::string>(ray, "--medium", "ray", "medium", "two-media, linear or constant");
  bindings.add<double>(ray, "--angle", "ray", "angle", "launch angle in degrees from +x");
  bindings.add<double>(ray, "--n1", "ray", "n1", "index left of the interface");
  bindings.add<double>(ray, "--n2", "ray", "n2", "index right of the interface");
  bindings.add<double>(ray, "--ds", "ray", "ds", "arc-length step");
  bindings.add<long long>(ray, "--steps", "ray", "steps", "maximum steps");

  auto* action = app.add_subcommand("action-surface", "Action surface from classical trajectories. Writes action.csv.");
  bindings.add<std::string>(action, "--mode", "action", "mode", "fixed-energy or point-source");
  bindings.add<std::string>(action, "--potential", "action", "potential", "free, uniform or harmonic");
  bindings.add<double>(action, "--energy", "action", "energy", "energy for fixed-energy mode");
  bindings.add<long long>(action, "--points", "action", "points", "grid points");

  auto* propagate = app.add_subcommand(
      "propagate", "Propagate a Gaussian packet. Writes norm.csv, psi_final.{bin,hdr} and psi_NNNNNN.{bin,hdr,pgm} snapshots.");
  add_wave(propagate, bindings);
  bindings.add<long long>(propagate, "--snapshot-stride", "output", "snapshot_stride", "steps between snapshots (0 = none)");

  auto* bohm = app.add_subcommand("bohm", "Bohmian ensemble trajectories. Writes trajectories.csv.");
  add_wave(bohm, bindings);
  bindings.add<long long>(bohm, "--particles", "bohm", "particles", "ensemble size");
  bindings.add<long long>(bohm, "--record-stride", "bohm", "record_stride", "steps between trajectory rows");

  auto* experiment = app.add_subcommand(
      "experiment", "Electron gun experiment 1, 2 or 3. Writes histogram.csv, flux.csv and density_NNNNNN.pgm snapshots.");
  std::optional<long long> experiment_number;
  experiment->add_option("number", experiment_number, "1 = free packet, 2 = single slit, 3 = double slit")
      ->required()
      ->check(CLI::Range(1, 3));
  add_apparatus(experiment, bindings);
  bindings.add<long long>(experiment, "--snapshot-stride", "output", "snapshot_stride", "steps between PGM snapshots");

  auto* compare = app.add_subcommand(
      "compare-modes", "Copenhagen flashes against Bohmian arrivals. Writes histogram_bohm.csv, histogram_copenhagen.csv, flux.csv.");
  std::optional<long long> compare_number;
  compare->add_option("number", compare_number, "experiment (default from config)")->check(CLI::Range(1, 3));
  add_apparatus(compare, bindings);

  auto* check = app.add_subcommand("check", "Run a numerical check and print PASS or FAIL.");
  std::string check_kind;
  check->add_option("kind", check_kind, "eikonal, hj, norm, continuity, semiclassical or equivariance")
      ->required()
      ->check(CLI::IsMember({"eikonal", "hj", "norm", "continuity", "semiclassical", "equivariance"}));
  std::optional<long long> check_steps;
  check->add_option("--steps", check_steps, "steps for norm and equivariance runs");
  bindings.add<long long>(check, "--count", "equivariance", "count", "equivariance ensemble size");
  bindings.add<long long>(check, "--points", "wave", "points", "grid points for wave checks");

  for (auto* sub : app.get_subcommands({})) {
    add_common(sub, common);
    sub->footer("Common flags: --config, --seed, --threads, --output-dir. Every run writes manifest.json.");
  }

  if (args.empty()) {
    out << app.help();
    return 2;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) {
      if (sub->parsed()) {
        err << sub->help();
        return 2;
      }
    }
    err << app.help();
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    RunConfig config;
    if (!common.config.empty()) config.load_file(common.config);
    if (common.seed) config.set("", "seed", *common.seed);
    if (common.threads) config.set("", "threads", *common.threads);
    if (common.output_dir) config.set("output", "dir", *common.output_dir);
    bindings.apply(chosen, config);

    const std::string name = chosen->get_name();
    if (name == "snell") return run_snell(config, out);
    if (name == "ray-trace") return run_ray_trace(config, out);
    if (name == "action-surface") return run_action_surface(config, out);
    if (name == "propagate") return run_propagate(config, out);
    if (name == "bohm") return run_bohm(config, out);
    if (name == "experiment") {
      config.set("apparatus", "experiment", *experiment_number);
      return run_experiment_command(config, out);
    }
    if (name == "compare-modes") {
      if (compare_number) config.set("apparatus", "experiment", *compare_number);
      return run_compare_modes(config, out);
    }
    if (check_steps) config.set(check_kind == "equivariance" ? "equivariance" : "wave", "steps", *check_steps);
    return run_check(config, check_kind, out);
  } catch (const ValidationError& e) {
    return fail(err, e.what(), 2);
  } catch (const NumericalError& e) {
    return fail(err, e.what(), 1);
  } catch (const nlohmann::json::exception& e) {
    return fail(err, e.what(), 2);
  } catch (const std::exception& e) {
    return fail(err, e.what(), 1);
  }
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace wavelab::cli
