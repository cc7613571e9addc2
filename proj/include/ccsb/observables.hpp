#pragma once

#include <utility>

#include "ccsb/state.hpp"
#include "ccsb/timeseries.hpp"
#include "ccsb/types.hpp"

// Measured quantities: norm, particle number, cross-correlation against a
// mirror target, Fourier spectra, the cumulative |CCF| error metric, and
// the mode density matrix with its position-space density and variance.
namespace ccsb {

// Both from one K x K overlap pass. The particle-number sum starts at
// particle_mode_offset (1 skips the distinguishable tunnelling mode).
std::pair<double, double> norm_and_particle_number(const WavefunctionState& state,
                                                   int particle_mode_offset = 0);

// Mirror target: coherent tunnelling label x bath Fock state.
struct MirrorTarget {
  cplx tunnelling_label;
  Occupation bath_occupation;
};

// <mirror|Psi(t)> for a system-bath state (tunnelling mode first).
cplx cross_correlation(const WavefunctionState& state, const MirrorTarget& mirror);

struct Curve {
  std::vector<double> t;
  std::vector<double> v;
};

enum class FtWindow { none, hann };

struct Spectrum {
  std::vector<double> omega;      // angular frequency, non-negative bins
  std::vector<double> magnitude;  // |dt * sum_m x_m e^{-i omega t_m}|
};

// DFT of uniformly sampled real data (zero_pad_factor >= 1 pads the length).
Spectrum ft_spectrum(const Curve& signal, FtWindow window = FtWindow::none,
                     int zero_pad_factor = 4);

// chi = integral over the common time range of | a(t) - b(t) | by the
// trapezoidal rule, the coarser curve linearly interpolated onto the finer
// grid. Feed |CCF| curves to reproduce the cumulative-error metric.
double chi_error(const Curve& a, const Curve& b);

double max_abs_difference(const Curve& a, const Curve& b);

// rho^(a,b) = sum_kl D_k* D_l e^{i(S_l - S_k)} <z_k|z_l> z_k^(a)* z_l^(b),
// hermitized by averaging with its adjoint (deviation asserted <= 1e-8
// relative).
Eigen::MatrixXcd density_matrix(const WavefunctionState& state, int mode_offset = 0);

struct PositionGrid {
  double q_min = -8.0, q_max = 10.0, dq = 0.02;
  int points() const { return static_cast<int>(std::lround((q_max - q_min) / dq)) + 1; }
  double at(int i) const { return q_min + i * dq; }
};

// Position-space density from the mode density matrix. Errors out when the
// grid cannot resolve the highest eigenfunction (its norm on the grid must
// reach 0.999).
Eigen::VectorXd one_body_density(const Eigen::MatrixXcd& rho, const PositionGrid& grid);

// Mean and variance of the unit-normalized density.
double density_mean(const Eigen::VectorXd& rho_q, const PositionGrid& grid);
double density_variance(const Eigen::VectorXd& rho_q, const PositionGrid& grid);

// Helpers for pulling curves out of recorded series.
Curve series_column(const TimeSeries& ts, const std::string& column);
// |x| from a _re/_im column pair.
Curve series_modulus(const TimeSeries& ts, const std::string& base_name);

}  // namespace ccsb
