#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wavelab/cli/dispatch.hpp"

namespace fs = std::filesystem;
using wavelab::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wavelab_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name != "manifest.json") files[name] = slurp(e.path());
  }
  return files;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"teleport"}).code == 2);
  CHECK(run({"snell", "--no-such-flag"}).code == 2);
  CHECK(run({"experiment", "4"}).code == 2);
  const Run r = run({"snell", "--theta1", "abc"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--theta1") != std::string::npos);
}

TEST_CASE("help lists flags and outputs") {
  const Run top = run({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : {"snell", "ray-trace", "action-surface", "propagate", "bohm", "experiment", "check",
                          "compare-modes"}) {
    CHECK(top.out.find(sub) != std::string::npos);
    const Run h = run({sub, "--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--seed") != std::string::npos);
    CHECK(h.out.find("--output-dir") != std::string::npos);
  }
  CHECK(run({"experiment", "--help"}).out.find("histogram.csv") != std::string::npos);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("snell prints the refraction angle") {
  const fs::path dir = scratch("snell");
  const Run r = run({"snell", "--output-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("theta2 = 19.4712") != std::string::npos);
  REQUIRE(fs::exists(dir / "snell.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  const std::string csv = slurp(dir / "snell.csv");
  CHECK(csv.rfind("law,theta1_deg,theta2_deg,outcome\n", 0) == 0);
  // asin(sin 30 / 1.5) written with 17 significant digits
  CHECK(csv.find("19.47122063449069") != std::string::npos);

  const Run tir = run({"snell", "--theta1", "60", "--n1", "1.5", "--n2", "1.0", "--output-dir", dir.string()});
  CHECK(tir.code == 0);
  CHECK(slurp(dir / "snell.csv").find("total-internal-reflection") != std::string::npos);
}

TEST_CASE("config files are validated") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  write_text(dir / "bad_key.json", R"({"snell": {"theta": 30.0}})");
  write_text(dir / "bad_type.json", R"({"snell": {"theta1": "thirty"}})");
  write_text(dir / "broken.json", "{ not json");
  write_text(dir / "good.json", R"({"snell": {"theta1": 0.0}})");
  CHECK(run({"snell", "--config", (dir / "bad_key.json").string(), "--output-dir", dir.string()}).code == 2);
  CHECK(run({"snell", "--config", (dir / "bad_type.json").string(), "--output-dir", dir.string()}).code == 2);
  CHECK(run({"snell", "--config", (dir / "broken.json").string(), "--output-dir", dir.string()}).code == 2);
  CHECK(run({"snell", "--config", (dir / "missing.json").string()}).code == 2);
  const Run ok = run({"snell", "--config", (dir / "good.json").string(), "--output-dir", dir.string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("theta2 = 0") != std::string::npos);
  CHECK(run({"snell", "--threads", "0"}).code == 2);
}

TEST_CASE("manifest keeps a stable key order and records the command") {
  const fs::path dir = scratch("manifest");
  REQUIRE(run({"snell", "--seed", "5", "--output-dir", dir.string()}).code == 0);
  const std::string m = slurp(dir / "manifest.json");
  CHECK(m.find("\"command\": \"snell\"") != std::string::npos);
  CHECK(m.find("\"seed\": 5") != std::string::npos);
  CHECK(m.find("\"action\"") < m.find("\"snell\""));
  REQUIRE(run({"snell", "--seed", "5", "--output-dir", dir.string()}).code == 0);
  CHECK(slurp(dir / "manifest.json") == m);
}

TEST_CASE("checks report PASS and exit 0") {
  const fs::path dir = scratch("check");
  const Run r = run({"check", "norm", "--steps", "200", "--output-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS", 0) == 0);
  CHECK(fs::exists(dir / "norm.csv"));
  CHECK(run({"check", "nonsense"}).code == 2);
}

TEST_CASE("a failed check exits with 1") {
  const fs::path dir = scratch("failing");
  fs::create_directories(dir);
  write_text(dir / "strict.json", R"({"tolerances": {"norm_drift": 1e-300}})");
  const Run r = run({"check", "norm", "--steps", "200", "--config", (dir / "strict.json").string(), "--output-dir",
                     dir.string()});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("FAIL", 0) == 0);
}

TEST_CASE("re-running from a manifest reproduces the outputs byte for byte") {
  const fs::path first = scratch("replay_a");
  const fs::path second = scratch("replay_b");
  REQUIRE(run({"bohm", "--particles", "50", "--steps", "100", "--k0", "1.5", "--seed", "9", "--threads", "2",
               "--output-dir", first.string()})
              .code == 0);
  REQUIRE(run({"bohm", "--config", (first / "manifest.json").string(), "--threads", "1", "--output-dir",
               second.string()})
              .code == 0);
  const auto a = outputs(first);
  const auto b = outputs(second);
  CHECK(a.size() >= 1);
  CHECK(a == b);
}

TEST_CASE("the output directory can come from the environment") {
  const fs::path dir = scratch("env");
  ::setenv("WAVELAB_OUTPUT_DIR", dir.string().c_str(), 1);
  const Run r = run({"snell", "--output-dir", "ignored_dir"});
  ::unsetenv("WAVELAB_OUTPUT_DIR");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "snell.csv"));
  CHECK_FALSE(fs::exists("ignored_dir"));
}

TEST_CASE("the installed binary returns the documented exit codes") {
  const std::string exe = WAVELAB_CLI_PATH;
  CHECK(WEXITSTATUS(std::system((exe + " > /dev/null 2>&1").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((exe + " frobnicate > /dev/null 2>&1").c_str())) == 2);
  const fs::path dir = scratch("binary");
  CHECK(WEXITSTATUS(std::system((exe + " snell --output-dir " + dir.string() + " > /dev/null").c_str())) == 0);
}
