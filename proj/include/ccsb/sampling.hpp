#pragma once

#include <cstdint>

#include "ccsb/rng.hpp"
#include "ccsb/types.hpp"

// Monte-Carlo generation of the initial coherent-state basis and the
// projection of the initial wavefunction onto it.
//
// Tunnelling-mode labels are Gaussian about the initial centre,
// f(z) ~ exp(-sigma |z - z0|^2). Second-quantised modes draw |z|^2 from a
// gamma distribution of shape n+1: scale sigma for occupied modes (the
// distribution peaks at sigma*n) and scale 1/sigma for empty ones (larger
// sigma compresses toward the vacuum); the phase is uniform. Streams are
// split per mode, so a fixed seed gives a bit-identical basis.
namespace ccsb {

struct SamplingSpec {
  int k_configs = 1;
  double sigma_tunnelling = 1.0;  // tunnelling-mode width (system-bath runs)
  double sigma_occupied = 1.0;    // compression for modes with n > 0
  double sigma_empty = 100.0;     // compression for modes with n = 0
  uint64_t seed = 1;
  Occupation initial_occupation;  // one entry per second-quantised mode
  double q0 = 0.0, p0 = 0.0;      // initial tunnelling centre
  bool has_tunnelling_mode = false;
  bool renormalize = false;       // leave the projected norm untouched by default

  int num_modes() const {
    return static_cast<int>(initial_occupation.size()) + (has_tunnelling_mode ? 1 : 0);
  }
  cplx tunnelling_centre() const { return label_from_qp(q0, p0); }
};

Eigen::VectorXcd sample_gaussian_mode(cplx z0, double sigma, int k_configs, RandomStream& rng);

Eigen::VectorXcd sample_gamma_mode(int occupation, double sigma, int k_configs,
                                   RandomStream& rng);

// K configuration columns; mode m uses the stream derived from (seed, m).
Eigen::MatrixXcd build_initial_basis(const SamplingSpec& spec);

struct ProjectionResult {
  Eigen::VectorXcd amp;
  double achieved_norm = 0.0;  // <Psi(0)|Psi(0)> of the projected state
  double fidelity = 0.0;       // |<target|Psi(0)>|^2 / (<target|target> <Psi(0)|Psi(0)>)
  int rank = 0;
  double condition = 0.0;
};

// Solves sum_l <z_k|z_l> D_l = <z_k|target> by the regularized solver.
// target_overlaps must come from a unit-norm target state.
ProjectionResult project_initial_amplitudes(const Eigen::MatrixXcd& overlap_gram,
                                            const Eigen::VectorXcd& target_overlaps,
                                            double svd_cutoff, bool renormalize);

// <z_k|target> for both target shapes.
Eigen::VectorXcd target_overlaps_fock(const Eigen::MatrixXcd& basis, const Occupation& n);
Eigen::VectorXcd target_overlaps_tunnelling_fock(const Eigen::MatrixXcd& basis,
                                                 cplx tunnelling_centre,
                                                 const Occupation& bath_n);

}  // namespace ccsb
