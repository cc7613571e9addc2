#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccsb/runner.hpp"
#include "ccsb/timeseries.hpp"

using namespace ccsb;
namespace fs = std::filesystem;

namespace {

const char* kMinimalApp2 = R"(
[run]
application = app2
out = {OUT}
[model]
xi = 2.1
lambda0 = 0.01
n_bosons = 3
omega = 4
[sampling]
k_configs = 30
seed = 7
sigma_empty = 1e4
[propagator]
dt = 0.02
record_every = 10
t_end = 1.0
integrator = rk4
)";

std::string with_out(const std::string& text, const std::string& out) {
  std::string s = text;
  const auto pos = s.find("{OUT}");
  s.replace(pos, 5, out);
  return s;
}

fs::path temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("ccsb_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CCSB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WEXITSTATUS(raw);
}

}  // namespace

TEST_CASE("config parsing round-trips through the canonical form") {
  const auto cfg = parse_config_text(with_out(kMinimalApp2, "runs/x"));
  CHECK(cfg.application == Application::app2);
  CHECK(cfg.n_bosons == 3);
  CHECK(cfg.k_configs == 30);
  const std::string canon = canonical_config_text(cfg);
  const auto cfg2 = parse_config_text(canon);
  CHECK(canonical_config_text(cfg2) == canon);
  CHECK(config_hash_hex(cfg2) == config_hash_hex(cfg));
}

TEST_CASE("config validation rejects malformed input") {
  // missing lambda0
  CHECK_THROWS_AS(parse_config_text(R"(
[run]
application = app2
[model]
xi = 2.1
n_bosons = 3
omega = 4
[sampling]
k_configs = 10
seed = 1
sigma_empty = 100
[propagator]
dt = 0.1
t_end = 1
)"),
                  ConfigError);
  // unknown key
  CHECK_THROWS_AS(parse_config_text(with_out(kMinimalApp2, "x") + "\n[model]\nbogus = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nosuch]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[run]\napplication = warp\n"), ConfigError);
}

TEST_CASE("engine run writes observables, metadata, checkpoint; reruns bit-identically") {
  const auto dir = temp_dir("run_a");
  auto cfg = parse_config_text(with_out(kMinimalApp2, dir.string()));
  const auto outcome = run_simulation(cfg);
  REQUIRE(outcome.exit_code == kExitOk);
  REQUIRE(fs::exists(outcome.observables_csv));
  REQUIRE(fs::exists(outcome.metadata_json));
  REQUIRE(fs::exists(dir / "checkpoint.bin"));

  const auto series = read_csv(outcome.observables_csv);
  CHECK(series.uniform_spacing());
  CHECK(series.t.size() == 6);  // t = 0, 0.2, ..., 1.0
  CHECK(series.has_column("norm"));
  CHECK(series.has_column("density_variance"));

  // re-run from the metadata file into a fresh directory: bytes must match
  const auto dir_b = temp_dir("run_b");
  auto cfg_rerun = load_config_file(outcome.metadata_json);
  cfg_rerun.out_dir = dir_b.string();
  const auto outcome_b = run_simulation(cfg_rerun);
  REQUIRE(outcome_b.exit_code == kExitOk);
  CHECK(file_bytes(outcome.observables_csv) == file_bytes(outcome_b.observables_csv));
  fs::remove_all(dir);
  fs::remove_all(dir_b);
}

TEST_CASE("oracle run writes the same CSV layout") {
  const auto dir = temp_dir("oracle_a");
  auto cfg = parse_config_text(R"(
[run]
application = oracle-app2
out = )" + dir.string() + R"(
[model]
xi = 2.1
lambda0 = 0.01
n_bosons = 3
omega = 4
[propagator]
dt = 0.02
record_every = 10
t_end = 1.0
)");
  const auto outcome = run_simulation(cfg);
  REQUIRE(outcome.exit_code == kExitOk);
  const auto series = read_csv(outcome.observables_csv);
  CHECK(series.has_column("norm"));
  CHECK(series.has_column("particle_number"));
  CHECK(series.has_column("mean_position"));
  CHECK(series.has_column("density_variance"));
  CHECK(series.t.size() == 6);
  fs::remove_all(dir);
}

TEST_CASE("cli: run, compare with itself, tables, malformed config") {
  const auto dir = temp_dir("cli");
  const auto cfg_path = dir / "run.cfg";
  {
    std::ofstream f(cfg_path);
    f << with_out(kMinimalApp2, (dir / "out").string());
  }
  CHECK(run_cli("run --config " + cfg_path.string()) == kExitOk);
  const std::string csv = (dir / "out" / "observables.csv").string();
  REQUIRE(fs::exists(csv));

  // self-compare: chi must be zero for every column
  const std::string report = (dir / "report.csv").string();
  CHECK(run_cli("compare " + csv + " " + csv + " --metric chi --report " + report) == kExitOk);
  const auto rep = read_csv(report);
  for (const auto& row : rep.rows) CHECK(row[0] == 0.0);

  // tables dump
  CHECK(run_cli("tables --omega 4 --out " + (dir / "tables").string()) == kExitOk);
  CHECK(fs::exists(dir / "tables" / "delta.csv"));
  CHECK(fs::exists(dir / "tables" / "epsilon.csv"));

  // malformed config: config-error exit code, no partial outputs
  const auto bad_path = dir / "bad.cfg";
  {
    std::ofstream f(bad_path);
    f << "[run]\napplication = app2\nout = " << (dir / "bad_out").string()
      << "\n[model]\nxi = 2.1\nn_bosons = 3\nomega = 4\n"
      << "[sampling]\nk_configs = 5\nseed = 1\nsigma_empty = 10\n"
      << "[propagator]\ndt = 0.1\nt_end = 1\n";  // lambda0 missing
  }
  CHECK(run_cli("run --config " + bad_path.string()) == kExitConfig);
  CHECK(!fs::exists(dir / "bad_out"));
  fs::remove_all(dir);
}

TEST_CASE("cli: seed override changes the run, same seed reproduces it") {
  const auto dir = temp_dir("cli_seed");
  const auto cfg_path = dir / "run.cfg";
  {
    std::ofstream f(cfg_path);
    f << with_out(kMinimalApp2, (dir / "a").string());
  }
  REQUIRE(run_cli("run --config " + cfg_path.string() + " --seed 42 --out " +
                  (dir / "a").string()) == kExitOk);
  REQUIRE(run_cli("run --config " + cfg_path.string() + " --seed 42 --out " +
                  (dir / "b").string()) == kExitOk);
  REQUIRE(run_cli("run --config " + cfg_path.string() + " --seed 43 --out " +
                  (dir / "c").string()) == kExitOk);
  const auto a = file_bytes((dir / "a" / "observables.csv").string());
  const auto b = file_bytes((dir / "b" / "observables.csv").string());
  const auto c = file_bytes((dir / "c" / "observables.csv").string());
  CHECK(a == b);
  CHECK(a != c);
  fs::remove_all(dir);
}

TEST_CASE("restart from a checkpoint resumes the clock and state") {
  const auto dir = temp_dir("restart");
  auto cfg = parse_config_text(with_out(kMinimalApp2, (dir / "first").string()));
  const auto first = run_simulation(cfg);
  REQUIRE(first.exit_code == kExitOk);

  auto cfg2 = cfg;
  cfg2.out_dir = (dir / "second").string();
  cfg2.restart_from = (dir / "first" / "checkpoint.bin").string();
  cfg2.t_end = 2.0;
  const auto second = run_simulation(cfg2);
  REQUIRE(second.exit_code == kExitOk);
  const auto series = read_csv(second.observables_csv);
  CHECK(series.t.front() == doctest::Approx(1.0));  // resumed at the end of run one
  CHECK(series.t.back() == doctest::Approx(2.0));
  fs::remove_all(dir);
}

TEST_CASE("presets resolve through CCSB_PRESET_DIR") {
  setenv("CCSB_PRESET_DIR", CCSB_SOURCE_DIR "/presets", 1);
  const auto path = find_preset_file("app2-desk");
  CHECK(fs::exists(path));
  const auto cfg = load_config_file(path);
  CHECK(cfg.application == Application::app2);
  CHECK(cfg.n_bosons == 5);
  CHECK_THROWS_AS(find_preset_file("no-such-preset"), ConfigError);
}
