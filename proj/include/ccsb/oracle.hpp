#pragma once

#include <unordered_map>
#include <vector>

#include "ccsb/observables.hpp"
#include "ccsb/tables.hpp"
#include "ccsb/types.hpp"

// Independent references the engine is judged against: Gauss-Hermite
// quadrature for the two-body table, exact truncated-Fock-space propagation
// of both models at desk scale, the analytic non-interacting solution, and
// a 1D grid propagation of the bare tunnelling mode.
namespace ccsb::oracle {

// Numerical evaluation of the four-eigenfunction integral behind
// delta^(a,b,c,d). Refuses point counts below the polynomial-exactness
// bound rather than returning a silently inexact value.
double quadrature_delta(int a, int b, int c, int d, int points);

// All occupation vectors with sum n over omega+1 modes, enumerated in a
// fixed lexicographic order with both-way index maps.
class FockBasis {
 public:
  FockBasis(int n_particles, int omega);

  int size() const { return static_cast<int>(states_.size()); }
  const Occupation& state(int i) const { return states_[static_cast<size_t>(i)]; }
  int index_of(const Occupation& n) const;
  int n_particles() const { return n_particles_; }
  int omega() const { return omega_; }

 private:
  int n_particles_, omega_;
  std::vector<Occupation> states_;
  std::unordered_map<std::string, int> index_;
};

// Exact dynamics of the trapped-boson model from |N,0,...,0>. Basis sizes
// up to 4000 go through a dense eigendecomposition (exact in t); larger
// ones (guarded at 2e5) through sparse RK45 at tolerance 1e-10.
struct TrapOracleResult {
  std::vector<double> t;
  std::vector<Eigen::MatrixXcd> rho;
  std::vector<double> mean;      // of the unit-normalized density
  std::vector<double> variance;
  std::vector<double> norm;
  std::vector<double> energy;
  int basis_size = 0;
};
TrapOracleResult exact_propagate_app2(int n_particles, int omega, double xi, double lambda0,
                                      const std::vector<double>& t_grid,
                                      const PositionGrid& grid);

// Exact cross-correlation of the system-bath model: tunnelling mode in an
// oscillator basis of `levels` states about the origin, bath bosons over
// the even-level modes. Refuses when the initial coherent state is not
// representable in `levels` states to 0.9999.
struct BathOracleResult {
  std::vector<double> t;
  std::vector<cplx> ccf;
  std::vector<double> energy;
  double representability = 0.0;
  int basis_size = 0;
};
BathOracleResult exact_propagate_app1(int m_total, int omega, int levels, double eta,
                                      double lambda, double q0, double q_mirror,
                                      const std::vector<double>& t_grid);

// Displaced-oscillator coherent dynamics: mean xi(1-cos t), variance 1/2.
struct AnalyticMoments {
  double mean;
  double variance;
};
AnalyticMoments analytic_noninteracting(double xi, double t);

// Split-operator FFT propagation of the bare double-well mode; returns
// <mirror|psi(t)> on the given grid of times.
std::vector<cplx> grid_ccf_tunnelling(double eta, double q0, double q_mirror,
                                      const std::vector<double>& t_grid,
                                      int grid_points = 4096, double q_half_span = 12.0,
                                      double dt = 5e-4);

}  // namespace ccsb::oracle
