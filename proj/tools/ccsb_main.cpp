// Command-line front end: run / compare / tables.
#include <CLI11.hpp>
#include <iostream>

#include "ccsb/runner.hpp"
#include "ccsb/version.hpp"

namespace {

int do_run(const std::string& config_path, const std::string& preset, long long seed_override,
           const std::string& out_override, int workers_override) {
  ccsb::RunConfig cfg;
  if (!preset.empty())
    cfg = ccsb::load_config_file(ccsb::find_preset_file(preset));
  else if (!config_path.empty())
    cfg = ccsb::load_config_file(config_path);
  else
    throw ccsb::ConfigError("run: give --config FILE or --preset NAME");
  if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (workers_override >= 0) cfg.workers = workers_override;

  const auto outcome = ccsb::run_simulation(cfg);
  if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
  std::cout << "status: " << ccsb::to_string(outcome.status) << "\n"
            << "observables: " << outcome.observables_csv << "\n"
            << "metadata: " << outcome.metadata_json << "\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  ccsb::pin_linear_algebra_threads();
  CLI::App app{std::string("ccsb ") + ccsb::kVersion +
               " - coupled coherent states for indistinguishable bosons"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a simulation or oracle reference");
  std::string config_path, preset, out_override;
  long long seed_override = -1;
  int workers_override = -1;
  run->add_option("--config", config_path, "config file (.cfg, or metadata .json to re-run)");
  run->add_option("--preset", preset, "preset name from $CCSB_PRESET_DIR or ./presets");
  run->add_option("--seed", seed_override, "override the sampling seed");
  run->add_option("--out", out_override, "override the output directory");
  run->add_option("--workers", workers_override, "worker threads (0 = all cores)");

  auto* compare = app.add_subcommand("compare", "compare observable columns of two runs");
  std::string csv_a, csv_b, report;
  ccsb::CompareOptions copt;
  std::vector<std::string> map_specs;
  compare->add_option("run_a", csv_a, "first observables CSV")->required();
  compare->add_option("run_b", csv_b, "second observables CSV")->required();
  compare->add_option("--metric", copt.metric, "chi or max-abs")->default_val("chi");
  compare->add_option("--columns", copt.columns, "restrict to these columns");
  compare->add_option("--map", map_specs, "pair columns a_col=b_col");
  compare->add_option("--report", copt.report_path, "write metric values to this CSV");

  auto* tables = app.add_subcommand("tables", "dump the matrix-element tables");
  int omega = 10;
  bool even_only = false;
  std::string tables_out = "tables";
  tables->add_option("--omega", omega, "highest mode index")->required();
  tables->add_flag("--even", even_only, "even-level reduction (system-bath layout)");
  tables->add_option("--out", tables_out, "output directory")->default_val("tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return do_run(config_path, preset, seed_override, out_override, workers_override);
    if (compare->parsed()) {
      for (const auto& spec : map_specs) {
        const auto eq = spec.find('=');
        ccsb::require(eq != std::string::npos && eq > 0 && eq + 1 < spec.size(),
                      "compare: --map needs a_col=b_col");
        copt.column_map.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
      }
      return ccsb::run_compare(csv_a, csv_b, copt, std::cout);
    }
    if (tables->parsed()) return ccsb::run_tables_dump(omega, even_only, tables_out, std::cout);
  } catch (const ccsb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ccsb::kExitConfig;
  } catch (const ccsb::NumericsError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return ccsb::kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ccsb::kExitIo;
  }
  return ccsb::kExitConfig;
}
