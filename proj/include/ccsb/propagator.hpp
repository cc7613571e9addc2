#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ccsb/hamiltonians.hpp"
#include "ccsb/state.hpp"
#include "ccsb/timeseries.hpp"

// Integration of the coupled label/action/amplitude equations:
//   zdot_k = -i dHbar/dz_k*                         (trajectories)
//   Sdot_k = -Im(z_k* . zdot_k) - Hbar(z_k*, z_k)   (classical action)
//   sum_l <z_k|z_l> e^{iS_l} Ddot_l
//     = -i sum_l <z_k|z_l> e^{iS_l} D_l [ Hbar(z_k*,z_l) - Hbar(z_l*,z_l)
//                                         - i zdot_l . (z_k* - z_l*) ]
// with the amplitude system closed by the regularized minimum-norm solve.
// The bracket vanishes identically at k = l and the diagonal is skipped
// outright.
namespace ccsb {

struct PropagatorSettings {
  enum class Integrator { fixed_rk4, adaptive_rk45 };
  Integrator integrator = Integrator::adaptive_rk45;
  double dt = 0.01;          // fixed step for RK4; record grid unit for RK45
  double rel_tol = 1e-8;     // adaptive tolerances
  double abs_tol = 1e-10;
  double svd_cutoff = 1e-10;
  int record_every = 10;     // records every this many base steps
  double norm_guard = 0.5;   // abort when |norm/norm0 - 1| exceeds this; <=0 disables
  int checkpoint_every = 0;  // checkpoint every this many records; 0 = final only
  std::string checkpoint_path;  // empty = no checkpoints
  uint64_t checkpoint_seed = 0;      // run identity stamped into checkpoints
  std::string checkpoint_hash;
};

enum class PropagationStatus { ok, norm_guard_abort, solver_degenerate, step_underflow };

const char* to_string(PropagationStatus s);

struct RhsResult {
  Eigen::MatrixXcd zdot;
  Eigen::VectorXcd amp_dot;
  Eigen::VectorXd action_dot;
  int solve_rank = 0;
  double solve_condition = 0.0;
};

// One full derivative evaluation; the brute-force reference in the tests
// pins this down at small K.
RhsResult compute_rhs(const WavefunctionState& state, const NormalOrderedHamiltonian& h,
                      double svd_cutoff);

// Norm <Psi|Psi> of the current state (also used by the runaway guard).
double state_norm(const WavefunctionState& state);

struct Monitor {
  std::vector<std::string> columns;
  std::function<void(const WavefunctionState&, std::vector<double>&)> sample;
};

struct PropagationResult {
  PropagationStatus status = PropagationStatus::ok;
  std::string message;
  TimeSeries series;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long rhs_evaluations = 0;
  int last_rank = 0;
  double last_condition = 0.0;
};

// Advances the state to t_end, sampling all monitors on the uniform record
// grid; on guard/solver failures the partial series is returned with the
// corresponding status. Backward propagation (t_end < t) is supported.
PropagationResult propagate(WavefunctionState& state, const NormalOrderedHamiltonian& h,
                            const PropagatorSettings& settings, double t_end,
                            const std::vector<Monitor>& monitors);

// Restart records: labels, amplitudes, actions, clock, seed, settings hash.
void save_checkpoint(const std::string& path, const WavefunctionState& state, uint64_t seed,
                     const std::string& settings_hash);
struct Checkpoint {
  WavefunctionState state;
  uint64_t seed = 0;
  std::string settings_hash;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ccsb
