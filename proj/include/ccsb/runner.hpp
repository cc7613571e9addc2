#pragma once

#include <iosfwd>

#include "ccsb/config.hpp"

// Run orchestration: sampling -> projection -> propagation -> output files
// (or an oracle run producing the same CSV layout), plus run comparison and
// the table dump.
namespace ccsb {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNormGuard = 3;
inline constexpr int kExitSolver = 4;
inline constexpr int kExitUnderflow = 5;
inline constexpr int kExitIo = 6;

int exit_code_for(PropagationStatus status);

// Single-threaded BLAS/Eigen (deterministic output for any worker count);
// call once at program start. Honors a pre-set OPENBLAS_NUM_THREADS.
void pin_linear_algebra_threads();

struct RunOutcome {
  int exit_code = kExitOk;
  PropagationStatus status = PropagationStatus::ok;
  std::string message;
  std::string observables_csv;
  std::string metadata_json;
};

RunOutcome run_simulation(const RunConfig& cfg);

struct CompareOptions {
  std::string metric = "chi";  // chi | max-abs
  std::vector<std::string> columns;  // empty = all shared columns
  std::vector<std::pair<std::string, std::string>> column_map;  // a-name -> b-name
  std::string report_path;  // optional CSV report
};

int run_compare(const std::string& csv_a, const std::string& csv_b, const CompareOptions& opt,
                std::ostream& out);

int run_tables_dump(int omega, bool even_only, const std::string& out_dir, std::ostream& log);

}  // namespace ccsb
