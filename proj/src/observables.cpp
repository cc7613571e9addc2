#include "ccsb/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "ccsb/gauss_hermite.hpp"
#include "ccsb/overlaps.hpp"

namespace ccsb {

std::pair<double, double> norm_and_particle_number(const WavefunctionState& state,
                                                   int particle_mode_offset) {
  const int k_count = state.num_configs();
  const int modes = state.num_modes();
  require(particle_mode_offset >= 0 && particle_mode_offset < modes,
          "norm_and_particle_number: bad mode offset");
  const Eigen::MatrixXcd g = overlap_matrix(state.z);
  Eigen::VectorXcd c(k_count);
  for (int k = 0; k < k_count; ++k)
    c[k] = state.amp[k] * std::exp(cplx(0.0, state.action[k]));

  const auto zoff = state.z.bottomRows(modes - particle_mode_offset);
  const Eigen::MatrixXcd occ = zoff.adjoint() * zoff;
  cplx norm_acc(0, 0), number_acc(0, 0);
  for (int l = 0; l < k_count; ++l) {
    for (int k = 0; k < k_count; ++k) {
      const cplx w = std::conj(c[k]) * c[l] * g(k, l);
      norm_acc += w;
      number_acc += w * occ(k, l);
    }
  }
  return {norm_acc.real(), number_acc.real()};
}

cplx cross_correlation(const WavefunctionState& state, const MirrorTarget& mirror) {
  const int modes = state.num_modes();
  require(static_cast<size_t>(modes) == mirror.bath_occupation.size() + 1,
          "cross_correlation: state shape does not match mirror");
  cplx acc(0, 0);
  const double mirror_half_norm = 0.5 * std::norm(mirror.tunnelling_label);
  for (int l = 0; l < state.num_configs(); ++l) {
    const cplx zl = state.z(0, l);
    const cplx gauss = std::exp(std::conj(mirror.tunnelling_label) * zl -
                                mirror_half_norm - 0.5 * std::norm(zl));
    // <n_bath | z_l,bath> = conj(<z_l,bath | n_bath>)
    const cplx bath = std::conj(
        fock_overlap(state.z.col(l).tail(modes - 1), mirror.bath_occupation));
    acc += state.amp[l] * std::exp(cplx(0.0, state.action[l])) * gauss * bath;
  }
  return acc;
}

Spectrum ft_spectrum(const Curve& signal, FtWindow window, int zero_pad_factor) {
  const std::size_t n = signal.t.size();
  require(n >= 2, "ft_spectrum: need at least two samples");
  require(signal.v.size() == n, "ft_spectrum: ragged curve");
  require(zero_pad_factor >= 1, "ft_spectrum: zero_pad_factor must be >= 1");
  const double dt = signal.t[1] - signal.t[0];
  for (std::size_t i = 2; i < n; ++i)
    require(std::abs(signal.t[i] - signal.t[i - 1] - dt) <= 1e-9 * std::max(1.0, std::abs(dt)),
            "ft_spectrum: non-uniform sampling");

  const std::size_t n_pad = n * static_cast<std::size_t>(zero_pad_factor);
  std::vector<cplx> in(n_pad, cplx(0, 0)), out(n_pad);
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    if (window == FtWindow::hann)
      w = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / (n - 1)));
    in[i] = signal.v[i] * w;
  }
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n_pad),
                                    reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  Spectrum spec;
  const std::size_t n_half = n_pad / 2 + 1;
  spec.omega.resize(n_half);
  spec.magnitude.resize(n_half);
  const double d_omega = 2.0 * M_PI / (static_cast<double>(n_pad) * dt);
  for (std::size_t k = 0; k < n_half; ++k) {
    spec.omega[k] = d_omega * static_cast<double>(k);
    spec.magnitude[k] = dt * std::abs(out[k]);
  }
  return spec;
}

namespace {

double interp(const Curve& c, double t) {
  const auto it = std::upper_bound(c.t.begin(), c.t.end(), t);
  if (it == c.t.begin()) return c.v.front();
  if (it == c.t.end()) return c.v.back();
  const std::size_t j = static_cast<std::size_t>(it - c.t.begin());
  const double f = (t - c.t[j - 1]) / (c.t[j] - c.t[j - 1]);
  return (1.0 - f) * c.v[j - 1] + f * c.v[j];
}

double median_spacing(const Curve& c) {
  std::vector<double> d(c.t.size() - 1);
  for (std::size_t i = 0; i + 1 < c.t.size(); ++i) d[i] = c.t[i + 1] - c.t[i];
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return d[d.size() / 2];
}

void check_curves(const Curve& a, const Curve& b, double& lo, double& hi) {
  require(a.t.size() >= 2 && b.t.size() >= 2, "curve comparison: need at least two samples");
  require(a.t.size() == a.v.size() && b.t.size() == b.v.size(), "curve comparison: ragged curve");
  lo = std::max(a.t.front(), b.t.front());
  hi = std::min(a.t.back(), b.t.back());
  require(lo < hi, "curve comparison: time ranges do not overlap");
}

}  // namespace

double chi_error(const Curve& a, const Curve& b) {
  double lo, hi;
  check_curves(a, b, lo, hi);
  // integrate on the finer of the two grids, restricted to the common range
  const Curve& fine = median_spacing(a) <= median_spacing(b) ? a : b;
  std::vector<double> grid;
  grid.push_back(lo);
  for (double t : fine.t)
    if (t > lo && t < hi) grid.push_back(t);
  grid.push_back(hi);
  double chi = 0.0;
  double prev_t = grid[0], prev_d = std::abs(interp(a, grid[0]) - interp(b, grid[0]));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double d = std::abs(interp(a, grid[i]) - interp(b, grid[i]));
    chi += 0.5 * (d + prev_d) * (grid[i] - prev_t);
    prev_t = grid[i];
    prev_d = d;
  }
  return chi;
}

double max_abs_difference(const Curve& a, const Curve& b) {
  double lo, hi;
  check_curves(a, b, lo, hi);
  const Curve& fine = median_spacing(a) <= median_spacing(b) ? a : b;
  double worst = std::abs(interp(a, lo) - interp(b, lo));
  for (double t : fine.t) {
    if (t < lo || t > hi) continue;
    worst = std::max(worst, std::abs(interp(a, t) - interp(b, t)));
  }
  worst = std::max(worst, std::abs(interp(a, hi) - interp(b, hi)));
  return worst;
}

Eigen::MatrixXcd density_matrix(const WavefunctionState& state, int mode_offset) {
  const int k_count = state.num_configs();
  const int modes = state.num_modes() - mode_offset;
  require(modes >= 1, "density_matrix: bad mode offset");
  const Eigen::MatrixXcd g = overlap_matrix(state.z);
  Eigen::VectorXcd c(k_count);
  for (int k = 0; k < k_count; ++k)
    c[k] = state.amp[k] * std::exp(cplx(0.0, state.action[k]));

  const auto zblock = state.z.bottomRows(modes);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(modes, modes);
  for (int l = 0; l < k_count; ++l)
    for (int k = 0; k < k_count; ++k) {
      const cplx w = std::conj(c[k]) * c[l] * g(k, l);
      rho.noalias() += w * (zblock.col(k).conjugate() * zblock.col(l).transpose());
    }
  // Hermitize; the asymmetry is pure round-off and is bounded here.
  const double dev = (rho - rho.adjoint()).norm();
  const double scale = std::max(1.0, rho.norm());
  require(dev <= 1e-8 * scale, "density_matrix: non-Hermitian result");
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

Eigen::VectorXd one_body_density(const Eigen::MatrixXcd& rho, const PositionGrid& grid) {
  const int modes = static_cast<int>(rho.rows());
  require(rho.cols() == modes, "one_body_density: rho must be square");
  const int n_points = grid.points();
  require(n_points >= 2, "one_body_density: empty grid");

  // Row-major so each grid row is contiguous for the recurrence.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> phi(n_points, modes);
  for (int i = 0; i < n_points; ++i)
    oscillator_eigenfunctions(grid.at(i), modes - 1, phi.row(i).data());

  // The grid must hold the highest retained eigenfunction.
  const double top_norm =
      (phi.col(modes - 1).array().square().sum() -
       0.5 * (phi(0, modes - 1) * phi(0, modes - 1) +
              phi(n_points - 1, modes - 1) * phi(n_points - 1, modes - 1))) *
      grid.dq;
  require(top_norm >= 0.999,
          "one_body_density: grid too short or too coarse for the highest level");

  Eigen::VectorXd rho_q(n_points);
  const Eigen::MatrixXd re = rho.real();
  for (int i = 0; i < n_points; ++i) {
    const auto row = phi.row(i);
    rho_q[i] = (row * re * row.transpose()).value();  // imaginary parts cancel by hermiticity
  }
  return rho_q;
}

namespace {
double trapezoid(const Eigen::VectorXd& f, double dq) {
  return (f.sum() - 0.5 * (f[0] + f[f.size() - 1])) * dq;
}
}  // namespace

double density_mean(const Eigen::VectorXd& rho_q, const PositionGrid& grid) {
  require(rho_q.size() == grid.points(), "density_mean: grid size mismatch");
  const double total = trapezoid(rho_q, grid.dq);
  require(total > 0.0, "density_mean: density integrates to zero");
  Eigen::VectorXd qf(rho_q.size());
  for (int i = 0; i < rho_q.size(); ++i) qf[i] = grid.at(i) * rho_q[i];
  return trapezoid(qf, grid.dq) / total;
}

double density_variance(const Eigen::VectorXd& rho_q, const PositionGrid& grid) {
  require(rho_q.size() == grid.points(), "density_variance: grid size mismatch");
  const double total = trapezoid(rho_q, grid.dq);
  require(total > 0.0, "density_variance: density integrates to zero");
  Eigen::VectorXd qf(rho_q.size()), q2f(rho_q.size());
  for (int i = 0; i < rho_q.size(); ++i) {
    const double q = grid.at(i);
    qf[i] = q * rho_q[i];
    q2f[i] = q * q * rho_q[i];
  }
  const double mean = trapezoid(qf, grid.dq) / total;
  return trapezoid(q2f, grid.dq) / total - mean * mean;
}

Curve series_column(const TimeSeries& ts, const std::string& column) {
  Curve c;
  c.t = ts.t;
  c.v = ts.column(column);
  return c;
}

Curve series_modulus(const TimeSeries& ts, const std::string& base_name) {
  const auto re = ts.column(base_name + "_re");
  const auto im = ts.column(base_name + "_im");
  Curve c;
  c.t = ts.t;
  c.v.resize(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) c.v[i] = std::hypot(re[i], im[i]);
  return c;
}

}  // namespace ccsb
