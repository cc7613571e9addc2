#include "ccsb/oracle.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

#include "ccsb/gauss_hermite.hpp"

namespace ccsb::oracle {

double quadrature_delta(int a, int b, int c, int d, int points) {
  require(a >= 0 && b >= 0 && c >= 0 && d >= 0, "quadrature_delta: negative index");
  const int sum = a + b + c + d;
  require(points >= 2 + sum / 2,
          "quadrature_delta: too few points for exact integration of this order");
  const auto rule = gauss_hermite(points);
  const int top = std::max(std::max(a, b), std::max(c, d));
  Eigen::VectorXd phi(top + 1);
  double acc = 0.0;
  for (int j = 0; j < points; ++j) {
    const double x = rule.x[j];
    const double q = x / std::sqrt(2.0);
    const double wt = rule.w[j] * std::exp(x * x) / std::sqrt(2.0);
    oscillator_eigenfunctions(q, top, phi.data());
    acc += wt * phi[a] * phi[b] * phi[c] * phi[d];
  }
  return acc;
}

// ------------------------------------------------------------- Fock basis --

namespace {
std::string occupation_key(const Occupation& n) {
  std::string key(n.size() * sizeof(int), '\0');
  std::memcpy(key.data(), n.data(), key.size());
  return key;
}
}  // namespace

FockBasis::FockBasis(int n_particles, int omega) : n_particles_(n_particles), omega_(omega) {
  require(n_particles >= 0 && omega >= 0, "FockBasis: bad parameters");
  // lexicographic enumeration by leading occupation (descending remainder)
  Occupation current(static_cast<size_t>(omega) + 1, 0);
  const int modes = omega + 1;
  // iterative composition enumeration
  std::vector<int> rest(static_cast<size_t>(modes) + 1, 0);
  std::function<void(int, int)> walk = [&](int mode, int remaining) {
    if (mode == modes - 1) {
      current[static_cast<size_t>(mode)] = remaining;
      index_.emplace(occupation_key(current), static_cast<int>(states_.size()));
      states_.push_back(current);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      current[static_cast<size_t>(mode)] = k;
      walk(mode + 1, remaining - k);
    }
  };
  walk(0, n_particles);
}

int FockBasis::index_of(const Occupation& n) const {
  const auto it = index_.find(occupation_key(n));
  require(it != index_.end(), "FockBasis: state outside basis");
  return it->second;
}

// --------------------------------------------------- dense / sparse tools --

namespace {

constexpr int kDenseLimit = 4000;
constexpr int kBasisGuard = 200000;

struct SparseMatrix {
  int n = 0;
  std::vector<int> row_start, col;
  std::vector<double> val;

  static SparseMatrix from_triplets(int n, std::vector<std::unordered_map<int, double>>& rows) {
    SparseMatrix s;
    s.n = n;
    s.row_start.assign(static_cast<size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) s.row_start[static_cast<size_t>(i) + 1] =
        s.row_start[static_cast<size_t>(i)] + static_cast<int>(rows[static_cast<size_t>(i)].size());
    s.col.resize(static_cast<size_t>(s.row_start.back()));
    s.val.resize(s.col.size());
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, double>> sorted(rows[static_cast<size_t>(i)].begin(),
                                                 rows[static_cast<size_t>(i)].end());
      std::sort(sorted.begin(), sorted.end());
      size_t at = static_cast<size_t>(s.row_start[static_cast<size_t>(i)]);
      for (const auto& [j, v] : sorted) {
        s.col[at] = j;
        s.val[at] = v;
        ++at;
      }
    }
    return s;
  }

  void multiply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    y.resize(n);
    for (int i = 0; i < n; ++i) {
      cplx acc(0, 0);
      for (int a = row_start[static_cast<size_t>(i)]; a < row_start[static_cast<size_t>(i) + 1];
           ++a)
        acc += val[static_cast<size_t>(a)] * x[col[static_cast<size_t>(a)]];
      y[i] = acc;
    }
  }
};

// Hamiltonian rows of the trapped-boson model over a Fock basis.
std::vector<std::unordered_map<int, double>> trap_hamiltonian_rows(
    const FockBasis& basis, const MatrixElementTables& tables, double xi, double lambda0) {
  const int modes = tables.omega + 1;
  const int dim = basis.size();
  std::vector<std::unordered_map<int, double>> rows(static_cast<size_t>(dim));
  Occupation scratch;
  for (int j = 0; j < dim; ++j) {
    const Occupation& n = basis.state(j);
    auto& row = rows[static_cast<size_t>(j)];

    double diag = 0.0;
    for (int a = 0; a < modes; ++a)
      diag += (tables.epsilon[a] + 0.5 * xi * xi) * n[static_cast<size_t>(a)];
    row[j] += diag;

    // one-body hops from -xi Q (first neighbours)
    for (int b = 0; b < modes; ++b) {
      if (n[static_cast<size_t>(b)] == 0) continue;
      for (int a : {b - 1, b + 1}) {
        if (a < 0 || a >= modes) continue;
        scratch = n;
        --scratch[static_cast<size_t>(b)];
        const double amp = -xi * tables.q(a, b) *
                           std::sqrt(static_cast<double>(n[static_cast<size_t>(b)])) *
                           std::sqrt(static_cast<double>(scratch[static_cast<size_t>(a)]) + 1.0);
        ++scratch[static_cast<size_t>(a)];
        row[basis.index_of(scratch)] += amp;
      }
    }

    if (lambda0 == 0.0) continue;
    // two-body: (lambda0/2) sum delta^(a,b,c,d) adag_a adag_b a_d a_c
    for (int c = 0; c < modes; ++c) {
      if (n[static_cast<size_t>(c)] == 0) continue;
      Occupation n1 = n;
      --n1[static_cast<size_t>(c)];
      const double f1 = std::sqrt(static_cast<double>(n[static_cast<size_t>(c)]));
      for (int d = 0; d < modes; ++d) {
        if (n1[static_cast<size_t>(d)] == 0) continue;
        Occupation n2 = n1;
        --n2[static_cast<size_t>(d)];
        const double f2 = f1 * std::sqrt(static_cast<double>(n1[static_cast<size_t>(d)]));
        for (int b = 0; b < modes; ++b) {
          Occupation n3 = n2;
          ++n3[static_cast<size_t>(b)];
          const double f3 = f2 * std::sqrt(static_cast<double>(n3[static_cast<size_t>(b)]));
          for (int a = 0; a < modes; ++a) {
            const double dval = tables.delta.value(a, b, d, c);
            if (dval == 0.0) continue;
            scratch = n3;
            ++scratch[static_cast<size_t>(a)];
            const double f4 =
                f3 * std::sqrt(static_cast<double>(scratch[static_cast<size_t>(a)]));
            row[basis.index_of(scratch)] += 0.5 * lambda0 * dval * f4;
          }
        }
      }
    }
  }
  return rows;
}

// rho^(a,b) = <psi| adag_a a_b |psi> over the Fock basis.
Eigen::MatrixXcd fock_density_matrix(const FockBasis& basis, const Eigen::VectorXcd& psi) {
  const int modes = basis.omega() + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(modes, modes);
  Occupation scratch;
  for (int j = 0; j < basis.size(); ++j) {
    const cplx pj = psi[j];
    if (pj == cplx(0, 0)) continue;
    const Occupation& n = basis.state(j);
    for (int b = 0; b < modes; ++b) {
      const int nb = n[static_cast<size_t>(b)];
      if (nb == 0) continue;
      rho(b, b) += std::norm(pj) * static_cast<double>(nb);
      for (int a = 0; a < modes; ++a) {
        if (a == b) continue;
        scratch = n;
        --scratch[static_cast<size_t>(b)];
        const double amp =
            std::sqrt(static_cast<double>(nb)) *
            std::sqrt(static_cast<double>(scratch[static_cast<size_t>(a)]) + 1.0);
        ++scratch[static_cast<size_t>(a)];
        rho(a, b) += std::conj(psi[basis.index_of(scratch)]) * pj * amp;
      }
    }
  }
  return rho;
}

// Adaptive RK45 on i dpsi/dt = H psi for the sparse path, tolerance 1e-10.
void sparse_schroedinger(const SparseMatrix& h, Eigen::VectorXcd& psi, double t_from,
                         double t_to) {
  const double rel = 1e-11, abs_tol = 1e-13;
  double t = t_from;
  double dt = (t_to - t_from) * 1e-3;
  const cplx mi(0.0, -1.0);
  Eigen::VectorXcd k1, k2, k3, k4, k5, k6, k7, ytmp, scratch;
  auto f = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
    h.multiply(x, scratch);
    out = mi * scratch;
  };
  f(psi, k1);
  while ((t_to - t) * (t_to - t_from) > 0.0) {
    if ((dt > 0.0 && t + dt > t_to) || (dt < 0.0 && t + dt < t_to)) dt = t_to - t;
    ytmp = psi + dt * (1.0 / 5) * k1;
    f(ytmp, k2);
    ytmp = psi + dt * ((3.0 / 40) * k1 + (9.0 / 40) * k2);
    f(ytmp, k3);
    ytmp = psi + dt * ((44.0 / 45) * k1 + (-56.0 / 15) * k2 + (32.0 / 9) * k3);
    f(ytmp, k4);
    ytmp = psi + dt * ((19372.0 / 6561) * k1 + (-25360.0 / 2187) * k2 + (64448.0 / 6561) * k3 +
                       (-212.0 / 729) * k4);
    f(ytmp, k5);
    ytmp = psi + dt * ((9017.0 / 3168) * k1 + (-355.0 / 33) * k2 + (46732.0 / 5247) * k3 +
                       (49.0 / 176) * k4 + (-5103.0 / 18656) * k5);
    f(ytmp, k6);
    ytmp = psi + dt * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4 +
                       (-2187.0 / 6784) * k5 + (11.0 / 84) * k6);
    f(ytmp, k7);
    double err = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      const cplx e = dt * ((71.0 / 57600) * k1[i] + (-71.0 / 16695) * k3[i] +
                           (71.0 / 1920) * k4[i] + (-17253.0 / 339200) * k5[i] +
                           (22.0 / 525) * k6[i] + (-1.0 / 40) * k7[i]);
      const double scale = abs_tol + rel * std::max(std::abs(psi[i]), std::abs(ytmp[i]));
      err += std::norm(e / scale);
    }
    err = std::sqrt(err / static_cast<double>(psi.size()));
    if (err <= 1.0) {
      t += dt;
      psi.swap(ytmp);
      k1.swap(k7);
    }
    const double factor = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    dt *= factor;
    require(std::abs(dt) > 1e-15 * std::max(1.0, std::abs(t)),
            "oracle sparse integrator: step underflow");
  }
}

}  // namespace

// ----------------------------------------------------------------- app 2 --

TrapOracleResult exact_propagate_app2(int n_particles, int omega, double xi, double lambda0,
                                      const std::vector<double>& t_grid,
                                      const PositionGrid& grid) {
  require(!t_grid.empty(), "exact_propagate_app2: empty time grid");
  const FockBasis basis(n_particles, omega);
  require(basis.size() <= kBasisGuard, "exact_propagate_app2: basis size guard exceeded");
  const auto tables = build_tables(omega, /*even_only=*/false);
  auto rows = trap_hamiltonian_rows(basis, tables, xi, lambda0);
  const int dim = basis.size();

  Occupation init(static_cast<size_t>(omega) + 1, 0);
  init[0] = n_particles;
  const int i0 = basis.index_of(init);

  TrapOracleResult out;
  out.basis_size = dim;
  out.t = t_grid;

  auto record = [&](const Eigen::VectorXcd& psi, double energy) {
    Eigen::MatrixXcd rho = fock_density_matrix(basis, psi);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Eigen::VectorXd rho_q = one_body_density(rho, grid);
    out.mean.push_back(density_mean(rho_q, grid));
    out.variance.push_back(density_variance(rho_q, grid));
    out.norm.push_back(psi.squaredNorm());
    out.energy.push_back(energy);
    out.rho.push_back(std::move(rho));
  };

  if (dim <= kDenseLimit) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (const auto& [j, v] : rows[static_cast<size_t>(i)]) h(i, j) = v;
    h = 0.5 * (h + h.transpose()).eval();  // symmetrize round-off
    Eigen::VectorXd energies(dim);
    const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', dim, h.data(), dim,
                                    energies.data());
    require(info == 0, "exact_propagate_app2: eigendecomposition failed");
    // h now holds the eigenvectors; coefficients of the initial unit vector
    const Eigen::VectorXd coeff = h.row(i0).transpose();
    Eigen::VectorXcd psi(dim);
    for (double t : t_grid) {
      Eigen::VectorXcd phase(dim);
      for (int e = 0; e < dim; ++e)
        phase[e] = coeff[e] * std::exp(cplx(0.0, -energies[e] * t));
      psi.noalias() = h.cast<cplx>() * phase;
      const double energy =
          (energies.array() * phase.array().abs2()).sum() / phase.squaredNorm();
      record(psi, energy);
    }
  } else {
    const SparseMatrix h = SparseMatrix::from_triplets(dim, rows);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi[i0] = 1.0;
    Eigen::VectorXcd hpsi;
    double t_now = t_grid.front();
    if (t_now != 0.0) sparse_schroedinger(h, psi, 0.0, t_now);
    for (size_t i = 0; i < t_grid.size(); ++i) {
      if (i > 0) {
        sparse_schroedinger(h, psi, t_now, t_grid[i]);
        t_now = t_grid[i];
      }
      h.multiply(psi, hpsi);
      record(psi, (psi.dot(hpsi)).real() / psi.squaredNorm());
    }
  }
  return out;
}

// ----------------------------------------------------------------- app 1 --

namespace {
// <j|z> for a real coherent-state centre, in sign/log form.
double coherent_coefficient(double z_real, int level) {
  if (z_real == 0.0) return level == 0 ? 1.0 : 0.0;
  const double sign = z_real < 0.0 && (level % 2 == 1) ? -1.0 : 1.0;
  return sign * std::exp(-0.5 * z_real * z_real + level * std::log(std::abs(z_real)) -
                         0.5 * std::lgamma(level + 1.0));
}
}  // namespace

BathOracleResult exact_propagate_app1(int m_total, int omega, int levels, double eta,
                                      double lambda, double q0, double q_mirror,
                                      const std::vector<double>& t_grid) {
  require(!t_grid.empty(), "exact_propagate_app1: empty time grid");
  require(levels >= 2, "exact_propagate_app1: need at least two tunnelling levels");
  const int n_bath = m_total - 1;
  require(n_bath >= 1, "exact_propagate_app1: need at least one bath boson");

  // Tunnelling block: diag(eps) - Q^2 + Q^4/(16 eta), with Q^4 formed from
  // the Q^2 matrix extended two levels so the truncated product is exact.
  const auto full = build_tables(levels + 1, /*even_only=*/false, /*with_delta=*/false);
  const Eigen::MatrixXd q2ext = full.q2;
  const Eigen::MatrixXd q4 =
      (q2ext * q2ext).topLeftCorner(levels, levels);
  Eigen::MatrixXd tun = -q2ext.topLeftCorner(levels, levels) + q4 / (16.0 * eta);
  for (int j = 0; j < levels; ++j) tun(j, j) += full.epsilon[j];
  const Eigen::MatrixXd q_tun = full.q.topLeftCorner(levels, levels);

  // Bath: number operator with even-level energies plus the one-body Q^2
  // coupling matrix within the Fock basis.
  const auto even = build_tables(omega, /*even_only=*/true, /*with_delta=*/false);
  const FockBasis basis(n_bath, omega);
  const int dim_bath = basis.size();
  const int dim = levels * dim_bath;
  require(dim <= kBasisGuard, "exact_propagate_app1: basis size guard exceeded");

  Eigen::VectorXd bath_diag(dim_bath);
  for (int i = 0; i < dim_bath; ++i) {
    const Occupation& n = basis.state(i);
    double e = 0.0;
    for (int a = 0; a <= omega; ++a) e += even.epsilon[a] * n[static_cast<size_t>(a)];
    bath_diag[i] = e;
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim_bath, dim_bath);
  Occupation scratch;
  for (int i = 0; i < dim_bath; ++i) {
    const Occupation& n = basis.state(i);
    for (int b = 0; b <= omega; ++b) {
      if (n[static_cast<size_t>(b)] == 0) continue;
      for (int a = std::max(0, b - 1); a <= std::min(omega, b + 1); ++a) {
        const double q2v = even.q2(a, b);
        if (q2v == 0.0) continue;
        scratch = n;
        --scratch[static_cast<size_t>(b)];
        const double amp = q2v * std::sqrt(static_cast<double>(n[static_cast<size_t>(b)])) *
                           std::sqrt(static_cast<double>(scratch[static_cast<size_t>(a)]) + 1.0);
        ++scratch[static_cast<size_t>(a)];
        w(basis.index_of(scratch), i) += amp;
      }
    }
  }

  // Initial and mirror states: coherent tunnelling wavepacket x bath Fock.
  const double z0 = q0 / std::sqrt(2.0);
  const double zm = q_mirror / std::sqrt(2.0);
  Eigen::VectorXd tun0(levels), tunm(levels);
  for (int j = 0; j < levels; ++j) {
    tun0[j] = coherent_coefficient(z0, j);
    tunm[j] = coherent_coefficient(zm, j);
  }
  BathOracleResult out;
  out.representability = tun0.squaredNorm();
  require(out.representability >= 0.9999,
          "exact_propagate_app1: initial state not representable in the level basis");
  out.basis_size = dim;
  out.t = t_grid;
  out.ccf.reserve(t_grid.size());
  out.energy.reserve(t_grid.size());

  Occupation init(static_cast<size_t>(omega) + 1, 0);
  init[0] = n_bath;
  const int ib = basis.index_of(init);

  if (dim <= kDenseLimit) {
    // H = tun (x) I + I (x) (diag + bath energies) + (lambda/2) q (x) W
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < levels; ++j)
      for (int jp = 0; jp < levels; ++jp) {
        const int r0 = j * dim_bath, c0 = jp * dim_bath;
        if (tun(j, jp) != 0.0)
          h.block(r0, c0, dim_bath, dim_bath).diagonal().array() += tun(j, jp);
        if (q_tun(j, jp) != 0.0)
          h.block(r0, c0, dim_bath, dim_bath) += 0.5 * lambda * q_tun(j, jp) * w;
      }
    for (int j = 0; j < levels; ++j)
      h.block(j * dim_bath, j * dim_bath, dim_bath, dim_bath).diagonal() += bath_diag;
    h = 0.5 * (h + h.transpose()).eval();

    Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(dim), psim = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < levels; ++j) {
      psi0[j * dim_bath + ib] = tun0[j];
      psim[j * dim_bath + ib] = tunm[j];
    }
    Eigen::VectorXd energies(dim);
    const int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', dim, h.data(), dim, energies.data());
    require(info == 0, "exact_propagate_app1: eigendecomposition failed");
    const Eigen::VectorXd c0 = h.transpose() * psi0;
    const Eigen::VectorXd cm = h.transpose() * psim;

    const double e0 = (energies.array() * c0.array().square()).sum();
    for (double t : t_grid) {
      cplx acc(0, 0);
      for (int e = 0; e < dim; ++e)
        acc += cm[e] * c0[e] * std::exp(cplx(0.0, -energies[e] * t));
      out.ccf.push_back(acc);
      out.energy.push_back(e0);  // conserved identically in the eigenbasis
    }
    return out;
  }

  // Sparse path: rows from the Kronecker structure, then RK45 at 1e-10.
  std::vector<std::unordered_map<int, double>> wrows(static_cast<size_t>(dim_bath));
  for (int i = 0; i < dim_bath; ++i)
    for (int m = 0; m < dim_bath; ++m)
      if (w(m, i) != 0.0) wrows[static_cast<size_t>(m)].emplace(i, w(m, i));
  std::vector<std::unordered_map<int, double>> rows(static_cast<size_t>(dim));
  for (int j = 0; j < levels; ++j)
    for (int i = 0; i < dim_bath; ++i) {
      auto& row = rows[static_cast<size_t>(j * dim_bath + i)];
      row[j * dim_bath + i] += bath_diag[i];
      for (int jp = 0; jp < levels; ++jp) {
        if (tun(j, jp) != 0.0) row[jp * dim_bath + i] += tun(j, jp);
        if (q_tun(j, jp) != 0.0)
          for (const auto& [ip, v] : wrows[static_cast<size_t>(i)])
            row[jp * dim_bath + ip] += 0.5 * lambda * q_tun(j, jp) * v;
      }
    }
  const SparseMatrix h = SparseMatrix::from_triplets(dim, rows);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim), psim = Eigen::VectorXcd::Zero(dim);
  for (int j = 0; j < levels; ++j) {
    psi[j * dim_bath + ib] = tun0[j];
    psim[j * dim_bath + ib] = tunm[j];
  }
  Eigen::VectorXcd hpsi;
  double t_now = 0.0;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] != t_now) sparse_schroedinger(h, psi, t_now, t_grid[i]);
    t_now = t_grid[i];
    out.ccf.push_back(psim.dot(psi));
    h.multiply(psi, hpsi);
    out.energy.push_back(psi.dot(hpsi).real() / psi.squaredNorm());
  }
  return out;
}

AnalyticMoments analytic_noninteracting(double xi, double t) {
  return {xi * (1.0 - std::cos(t)), 0.5};
}

std::vector<cplx> grid_ccf_tunnelling(double eta, double q0, double q_mirror,
                                      const std::vector<double>& t_grid, int grid_points,
                                      double q_half_span, double dt) {
  require(!t_grid.empty(), "grid_ccf_tunnelling: empty time grid");
  const int n = grid_points;
  const double dx = 2.0 * q_half_span / n;
  std::vector<cplx> psi(n), buf(n);
  std::vector<double> x(n), v(n), kin(n);
  for (int i = 0; i < n; ++i) {
    x[i] = -q_half_span + i * dx;
    v[i] = -0.5 * x[i] * x[i] + std::pow(x[i], 4) / (16.0 * eta);
    const int kidx = i <= n / 2 ? i : i - n;
    const double k = 2.0 * M_PI * kidx / (n * dx);
    kin[i] = 0.5 * k * k;
  }
  const double norm_const = std::pow(M_PI, -0.25) * std::sqrt(dx);
  std::vector<cplx> mirror(n);
  for (int i = 0; i < n; ++i) {
    psi[i] = norm_const * std::exp(-0.5 * (x[i] - q0) * (x[i] - q0));
    mirror[i] = norm_const * std::exp(-0.5 * (x[i] - q_mirror) * (x[i] - q_mirror));
  }

  fftw_plan fwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(psi.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(psi.data()),
                                   FFTW_BACKWARD, FFTW_ESTIMATE);

  std::vector<cplx> out;
  out.reserve(t_grid.size());
  double t_now = 0.0;
  auto ccf_now = [&]() {
    cplx acc(0, 0);
    for (int i = 0; i < n; ++i) acc += std::conj(mirror[i]) * psi[i];
    return acc;
  };
  for (double t_target : t_grid) {
    const double span = t_target - t_now;
    const long steps = std::max<long>(0, std::lround(span / dt));
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long s = 0; s < steps; ++s) {
      // Strang split: half potential, full kinetic, half potential.
      for (int i = 0; i < n; ++i) psi[i] *= std::exp(cplx(0.0, -0.5 * h * v[i]));
      fftw_execute(fwd);
      for (int i = 0; i < n; ++i) buf[i] *= std::exp(cplx(0.0, -h * kin[i])) / static_cast<double>(n);
      fftw_execute(bwd);
      for (int i = 0; i < n; ++i) psi[i] *= std::exp(cplx(0.0, -0.5 * h * v[i]));
    }
    t_now = t_target;
    out.push_back(ccf_now());
  }
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  return out;
}

}  // namespace ccsb::oracle
