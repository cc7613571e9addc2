#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccsb/observables.hpp"
#include "ccsb/propagator.hpp"
#include "ccsb/sampling.hpp"

// Run configuration: sectioned key = value text ([run], [model], [sampling],
// [propagator], [grid]), one section per module's settings. Presets ship as
// config files. Unknown sections or keys are errors; required keys are
// validated per application before any output is produced.
namespace ccsb {

enum class Application { app1, app2, oracle_app1, oracle_app2 };

const char* to_string(Application a);

struct RunConfig {
  Application application = Application::app2;

  // [run]
  std::string out_dir = "runs/out";
  int workers = 0;  // 0 = all hardware threads
  std::vector<std::string> observables;

  // [model]
  double eta = 1.3544;  // system-bath
  double lambda = 0.1;
  int m_total = 20;
  double xi = 2.1;  // trapped bosons
  double lambda0 = 0.001;
  int n_bosons = 100;
  int omega = 5;
  int oracle_levels = 40;  // tunnelling-mode basis size for the exact reference

  // [sampling]
  int k_configs = 100;
  uint64_t seed = 1;
  double sigma_tunnelling = 1.0;
  double sigma_occupied = 1.0;
  double sigma_empty = 100.0;
  double q0 = -2.5, p0 = 0.0;
  double mirror_q = 2.5, mirror_p = 0.0;
  bool renormalize = false;

  // [propagator]
  PropagatorSettings settings;
  double t_end = 10.0;
  std::string restart_from;

  // [observables]
  FtWindow ft_window = FtWindow::none;
  int ft_zero_pad = 4;

  // [grid]
  PositionGrid grid;

  Occupation initial_occupation() const;
  SamplingSpec sampling_spec() const;
  bool is_oracle() const {
    return application == Application::oracle_app1 || application == Application::oracle_app2;
  }
  bool is_bath_application() const {
    return application == Application::app1 || application == Application::oracle_app1;
  }
};

// Parses and validates; throws ConfigError with a precise message.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);  // .cfg or a metadata .json rerun

// Fixed-order reserialization: equal configs give equal text, and the text
// re-parses to an identical run.
std::string canonical_config_text(const RunConfig& cfg);

uint64_t fnv1a_hash(const std::string& text);
std::string config_hash_hex(const RunConfig& cfg);

// Preset lookup: $CCSB_PRESET_DIR, then ./presets.
std::string find_preset_file(const std::string& name);

}  // namespace ccsb
