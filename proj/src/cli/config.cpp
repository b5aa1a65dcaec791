#include "wavelab/cli/config.hpp"

#include <cstdlib>
#include <fstream>

namespace wavelab::cli {

Json default_config() {
  return Json::parse(R"({
    "seed": 1,
    "threads": 1,
    "constants": {"hbar": 1.0, "mass": 1.0, "c": 1.0, "omega": 1.0},
    "output": {"dir": "wavelab_out", "snapshot_stride": 0},
    "snell": {"law": "wave", "theta1": 30.0, "n1": 1.0, "n2": 1.5, "v1": 1.0, "v2": 1.5},
    "ray": {
      "medium": "two-media", "n1": 1.0, "n2": 1.5, "interface": 0.0, "n0": 1.0, "slope": 0.05,
      "x0": -5.0, "y0": -5.0, "width": 10.0, "height": 10.0, "nx": 201, "ny": 201,
      "start_x": -3.0, "start_y": 0.0, "angle": 30.0, "ds": 0.01, "steps": 600
    },
    "action": {
      "mode": "fixed-energy", "potential": "uniform", "force": -1.0, "stiffness": 1.0, "energy": 2.0,
      "x0": 0.0, "extent": 1.5, "points": 129, "dt": 0.0001,
      "time": 0.5, "time_step": 0.01, "launch_velocities": [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5]
    },
    "wave": {
      "dims": 1, "x0": -20.0, "extent": 40.0, "points": 256, "y0": -20.0, "height": 40.0, "ny": 256,
      "sigma": 1.0, "center_x": 0.0, "center_y": 0.0, "k0": 0.0, "potential": "free", "stiffness": 1.0,
      "dt": 0.01, "steps": 1000, "absorber_width": 0, "absorber_strength": 0.0, "norm_stride": 1
    },
    "bohm": {"particles": 1000, "record_stride": 10},
    "apparatus": {
      "experiment": 3, "mode": "copenhagen", "shots": 10000, "bins": 200,
      "slit_width": 0.0, "slit_separation": 0.0,
      "sigma": 3.2, "k0": 6.283185307179586, "packet_x": 28.0, "packet_y": 0.0,
      "barrier_x": 28.0, "screen_x": 92.0,
      "x0": 0.0, "y0": -40.0, "width": 98.0, "height": 80.0, "nx": 2048, "ny": 401,
      "duration": 12.0, "dt": 0.01, "absorber_width": 5.0, "absorber_strength": 30.0
    },
    "equivariance": {"count": 100000, "bins": 50, "steps": 347, "checkpoints": 5, "baseline_draws": 8, "mass": 0.9999},
    "tolerances": {
      "norm_drift": 1e-10, "eikonal": 1e-8, "hj_order": 3.5, "hj_floor": 1e-10,
      "continuity_order": 3.5, "semiclassical_scaling": 0.05, "equivariance_factor": 2.0, "mode_factor": 2.0
    }
  })");
}

namespace {

bool same_kind(const Json& a, const Json& b) {
  if (a.is_number() && b.is_number()) {
    // An integer default only takes integers; a float default takes any number.
    return !a.is_number_integer() || b.is_number_integer();
  }
  return a.type() == b.type();
}

}  // namespace

void merge_into(Json& base, const Json& overrides, const std::string& path) {
  if (!overrides.is_object()) throw ValidationError("config" + (path.empty() ? "" : " section " + path) + " must be an object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ValidationError("unknown config key '" + key + "'");
    Json& slot = base[it.key()];
    if (slot.is_object()) {
      merge_into(slot, it.value(), key);
      continue;
    }
    if (!same_kind(slot, it.value())) throw ValidationError("config key '" + key + "' has the wrong type");
    if (slot.is_number_float()) {
      slot = it.value().get<double>();
    } else {
      slot = it.value();
    }
  }
}

RunConfig::RunConfig() : tree_(default_config()) {}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  Json user;
  try {
    user = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  if (!user.is_object()) throw ValidationError("config file must hold a JSON object");
  user.erase("manifest");
  merge_into(tree_, user);
}

void RunConfig::set(const std::string& section, const std::string& key, Json value) {
  Json patch;
  if (section.empty()) {
    patch[key] = std::move(value);
  } else {
    patch[section][key] = std::move(value);
  }
  merge_into(tree_, patch);
}

const Json& RunConfig::node(const std::string& section, const std::string& key) const {
  const Json& parent = section.empty() ? tree_ : tree_.at(section);
  if (!parent.contains(key)) throw ValidationError("missing config key '" + section + "." + key + "'");
  return parent.at(key);
}

double RunConfig::number(const std::string& section, const std::string& key) const {
  return node(section, key).get<double>();
}

std::int64_t RunConfig::integer(const std::string& section, const std::string& key) const {
  return node(section, key).get<std::int64_t>();
}

std::size_t RunConfig::count(const std::string& section, const std::string& key) const {
  const std::int64_t v = integer(section, key);
  if (v < 0) throw ValidationError("config key '" + section + "." + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::string RunConfig::text(const std::string& section, const std::string& key) const {
  return node(section, key).get<std::string>();
}

std::uint64_t RunConfig::seed() const {
  const std::int64_t s = integer("", "seed");
  if (s < 0) throw ValidationError("seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

int RunConfig::threads() const {
  const std::int64_t t = integer("", "threads");
  if (t < 1 || t > 1024) throw ValidationError("threads must be between 1 and 1024");
  return static_cast<int>(t);
}

PhysicalConstants RunConfig::constants() const {
  PhysicalConstants c{number("constants", "hbar"), number("constants", "mass"), number("constants", "c"),
                      number("constants", "omega")};
  c.validate();
  return c;
}

std::filesystem::path RunConfig::output_dir() const {
  if (const char* env = std::getenv("WAVELAB_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return text("output", "dir");
}

Json RunConfig::manifest(const std::string& command, const std::string& target) const {
  Json m = tree_;
  m["manifest"] = {{"version", kVersion}, {"command", command}, {"target", target}};
  return m;
}

std::filesystem::path emit_manifest(const std::filesystem::path& dir, const Json& manifest) {
  std::filesystem::create_directories(dir);
  const auto path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
  return path;
}

}  // namespace wavelab::cli
