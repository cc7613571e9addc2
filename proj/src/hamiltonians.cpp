#include "ccsb/hamiltonians.hpp"

#include <cmath>

#include "ccsb/gauss_hermite.hpp"

namespace ccsb {

void NormalOrderedHamiltonian::evaluate_pairs(const Eigen::MatrixXcd& z,
                                              Eigen::MatrixXcd& out) const {
  const Eigen::Index k_count = z.cols();
  out.resize(k_count, k_count);
  for (Eigen::Index l = 0; l < k_count; ++l)
    for (Eigen::Index k = 0; k < k_count; ++k) out(k, l) = evaluate(z.col(k), z.col(l));
}

void NormalOrderedHamiltonian::evaluate_diag_batch(const Eigen::MatrixXcd& z,
                                                   Eigen::VectorXd& out) const {
  out.resize(z.cols());
  for (Eigen::Index k = 0; k < z.cols(); ++k) out[k] = evaluate_diag(z.col(k));
}

void NormalOrderedHamiltonian::gradient_batch(const Eigen::MatrixXcd& z,
                                              Eigen::MatrixXcd& out) const {
  out.resize(z.rows(), z.cols());
  for (Eigen::Index k = 0; k < z.cols(); ++k) out.col(k) = gradient(z.col(k));
}

// ---------------------------------------------------------------- app 1 --

TunnellingBathModel::TunnellingBathModel(double eta, double lambda, int omega, int m_total)
    : eta_(eta), lambda_(lambda), omega_(omega), m_total_(m_total) {
  require(eta > 0.0, "TunnellingBathModel: eta must be positive");
  require(omega >= 0, "TunnellingBathModel: omega must be non-negative");
  require(m_total >= 2, "TunnellingBathModel: need at least one bath oscillator");
  coupling_ = lambda / (2.0 * std::sqrt(2.0));
  inv_64eta_ = 1.0 / (64.0 * eta);
  tables_ = build_tables(omega, /*even_only=*/true);
  epsilon_c_ = tables_.epsilon.cast<cplx>();
  q2_c_ = tables_.q2.cast<cplx>();
}

namespace {
inline void check_modes(Eigen::Index got, int want, const char* who) {
  require(got == want, std::string(who) + ": mode count mismatch");
}
// Normal-ordered matrix element of (a + a^dag)^4: s^4 + 6 s^2 + 3 at
// s = bra* + ket.
inline cplx quartic_bracket(cplx s) {
  const cplx s2 = s * s;
  return s2 * s2 + 6.0 * s2 + 3.0;
}
}  // namespace

cplx TunnellingBathModel::evaluate(const ModeVector& bra, const ModeVector& ket) const {
  check_modes(bra.size(), num_modes(), "TunnellingBathModel::evaluate (bra)");
  check_modes(ket.size(), num_modes(), "TunnellingBathModel::evaluate (ket)");
  const cplx wk = std::conj(bra[0]);
  const cplx wl = ket[0];
  const cplx s = wk + wl;
  cplx value = -0.5 * (wk * wk + wl * wl) + inv_64eta_ * quartic_bracket(s);
  const int n = omega_ + 1;
  cplx bath(0, 0), coup(0, 0);
  for (int i = 0; i < n; ++i) {
    const cplx ai = std::conj(bra[i + 1]);
    bath += tables_.epsilon[i] * ai * ket[i + 1];
    cplx y = tables_.q2(i, i) * ket[i + 1];
    if (i > 0) y += tables_.q2(i, i - 1) * ket[i];
    if (i + 1 < n) y += tables_.q2(i, i + 1) * ket[i + 2];
    coup += ai * y;
  }
  return value + bath + coupling_ * s * coup;
}

double TunnellingBathModel::evaluate_diag(const ModeVector& z) const {
  check_modes(z.size(), num_modes(), "TunnellingBathModel::evaluate_diag");
  const cplx w = z[0];
  const double s = 2.0 * w.real();
  const double s2 = s * s;
  double value = -(w.real() * w.real() - w.imag() * w.imag())  // -Re(w^2)
                 + inv_64eta_ * (s2 * s2 + 6.0 * s2 + 3.0);
  const int n = omega_ + 1;
  double bath = 0.0, coup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double occ = std::norm(z[i + 1]);
    bath += tables_.epsilon[i] * occ;
    coup += tables_.q2(i, i) * occ;
    if (i + 1 < n)
      coup += 2.0 * tables_.q2(i, i + 1) * (std::conj(z[i + 1]) * z[i + 2]).real();
  }
  return value + bath + coupling_ * s * coup;
}

ModeVector TunnellingBathModel::gradient(const ModeVector& z) const {
  check_modes(z.size(), num_modes(), "TunnellingBathModel::gradient");
  const int n = omega_ + 1;
  ModeVector g(num_modes());
  const cplx w = z[0];
  const cplx s = std::conj(w) + w;
  cplx coup(0, 0);
  for (int i = 0; i < n; ++i) {
    cplx y = tables_.q2(i, i) * z[i + 1];
    if (i > 0) y += tables_.q2(i, i - 1) * z[i];
    if (i + 1 < n) y += tables_.q2(i, i + 1) * z[i + 2];
    coup += std::conj(z[i + 1]) * y;
    g[i + 1] = tables_.epsilon[i] * z[i + 1] + coupling_ * s * y;
  }
  g[0] = -std::conj(w) + inv_64eta_ * (4.0 * s * s * s + 12.0 * s) + coupling_ * coup;
  return g;
}

void TunnellingBathModel::evaluate_pairs(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const {
  check_modes(z.rows(), num_modes(), "TunnellingBathModel::evaluate_pairs");
  const Eigen::Index k_count = z.cols();
  const auto bath = z.bottomRows(omega_ + 1);
  const Eigen::MatrixXcd p1 = bath.adjoint() * (epsilon_c_.asDiagonal() * bath);
  const Eigen::MatrixXcd p2 = bath.adjoint() * (q2_c_ * bath);
  out.resize(k_count, k_count);
#pragma omp parallel for schedule(static)
  for (Eigen::Index l = 0; l < k_count; ++l) {
    const cplx wl = z(0, l);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      const cplx wk = std::conj(z(0, k));
      const cplx s = wk + wl;
      out(k, l) = -0.5 * (wk * wk + wl * wl) + inv_64eta_ * quartic_bracket(s) + p1(k, l) +
                  coupling_ * s * p2(k, l);
    }
  }
}

void TunnellingBathModel::evaluate_diag_batch(const Eigen::MatrixXcd& z,
                                              Eigen::VectorXd& out) const {
  out.resize(z.cols());
  for (Eigen::Index k = 0; k < z.cols(); ++k) out[k] = evaluate_diag(z.col(k));
}

void TunnellingBathModel::gradient_batch(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const {
  out.resize(z.rows(), z.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < z.cols(); ++k) out.col(k) = gradient(z.col(k));
}

// ---------------------------------------------------------------- app 2 --

TrappedBosonsModel::TrappedBosonsModel(double xi, double lambda0, int omega, int n_bosons)
    : xi_(xi), lambda0_(lambda0), omega_(omega), n_bosons_(n_bosons) {
  require(omega >= 0, "TrappedBosonsModel: omega must be non-negative");
  require(n_bosons >= 1, "TrappedBosonsModel: need at least one boson");
  tables_ = build_tables(omega, /*even_only=*/false);
  const int n = omega + 1;
  one_body_ = -xi_ * tables_.q;
  one_body_.diagonal() += (tables_.epsilon.array() + 0.5 * xi_ * xi_).matrix();

  // Node basis for the exact two-body factorisation. Quadrature for
  // integrands e^{-2Q^2} * poly(deg 4*omega): nodes at x_j/sqrt(2) with
  // weights w_j e^{x_j^2}/sqrt(2); a quarter-weight is absorbed into each
  // eigenfunction factor so per-node amplitudes stay O(1).
  const int nodes = 2 * omega + 2;
  const auto rule = gauss_hermite(nodes);
  node_basis_.resize(nodes, n);
  Eigen::VectorXd phi(n);
  for (int j = 0; j < nodes; ++j) {
    const double x = rule.x[j];
    const double wt = rule.w[j] * std::exp(x * x) / std::sqrt(2.0);
    oscillator_eigenfunctions(x / std::sqrt(2.0), omega, phi.data());
    node_basis_.row(j) = std::pow(wt, 0.25) * phi.transpose();
  }
  one_body_c_ = one_body_.cast<cplx>();
  node_basis_c_ = node_basis_.cast<cplx>();
}

cplx TrappedBosonsModel::evaluate(const ModeVector& bra, const ModeVector& ket) const {
  check_modes(bra.size(), num_modes(), "TrappedBosonsModel::evaluate (bra)");
  check_modes(ket.size(), num_modes(), "TrappedBosonsModel::evaluate (ket)");
  cplx value = bra.dot(one_body_c_ * ket);  // Eigen dot conjugates the left factor
  if (lambda0_ != 0.0) {
    const Eigen::VectorXcd u = node_basis_c_ * bra.conjugate();
    const Eigen::VectorXcd v = node_basis_c_ * ket;
    const cplx quart = (u.array().square() * v.array().square()).sum();
    value += 0.5 * lambda0_ * quart;
  }
  return value;
}

double TrappedBosonsModel::evaluate_diag(const ModeVector& z) const {
  check_modes(z.size(), num_modes(), "TrappedBosonsModel::evaluate_diag");
  const Eigen::VectorXd re = z.real(), im = z.imag();
  double value = re.dot(one_body_ * re) + im.dot(one_body_ * im);
  if (lambda0_ != 0.0) {
    const Eigen::VectorXcd v = node_basis_c_ * z;
    value += 0.5 * lambda0_ * v.array().abs2().square().sum();
  }
  return value;
}

ModeVector TrappedBosonsModel::gradient(const ModeVector& z) const {
  check_modes(z.size(), num_modes(), "TrappedBosonsModel::gradient");
  ModeVector g = one_body_c_ * z;
  if (lambda0_ != 0.0) {
    const Eigen::VectorXcd v = node_basis_c_ * z;
    const Eigen::VectorXcd f = (v.array().conjugate() * v.array() * v.array()).matrix();
    g += lambda0_ * (node_basis_c_.transpose() * f);
  }
  return g;
}

cplx TrappedBosonsModel::evaluate_reference(const ModeVector& bra, const ModeVector& ket) const {
  check_modes(bra.size(), num_modes(), "TrappedBosonsModel::evaluate_reference (bra)");
  check_modes(ket.size(), num_modes(), "TrappedBosonsModel::evaluate_reference (ket)");
  cplx value = bra.dot(one_body_c_ * ket);
  const int n = num_modes();
  cplx quart(0, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (((a + b + c + d) & 1) != 0) continue;
          quart += tables_.delta.value(a, b, c, d) * std::conj(bra[a]) * std::conj(bra[b]) *
                   ket[d] * ket[c];
        }
  return value + 0.5 * lambda0_ * quart;
}

void TrappedBosonsModel::evaluate_pairs(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const {
  check_modes(z.rows(), num_modes(), "TrappedBosonsModel::evaluate_pairs");
  out.noalias() = z.adjoint() * (one_body_c_ * z);
  if (lambda0_ != 0.0) {
    Eigen::MatrixXcd v(node_basis_.rows(), z.cols());
    v.real() = node_basis_ * z.real();
    v.imag() = node_basis_ * z.imag();
    const Eigen::MatrixXcd v2 = v.array().square().matrix();
    out.noalias() += (0.5 * lambda0_) * (v2.adjoint() * v2).eval();
  }
}

void TrappedBosonsModel::evaluate_diag_batch(const Eigen::MatrixXcd& z,
                                             Eigen::VectorXd& out) const {
  out.resize(z.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < z.cols(); ++k) out[k] = evaluate_diag(z.col(k));
}

void TrappedBosonsModel::gradient_batch(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const {
  const int n = num_modes();
  out.resize(n, z.cols());
  out.noalias() = one_body_c_ * z;
  if (lambda0_ != 0.0) {
    Eigen::MatrixXcd v(node_basis_.rows(), z.cols());
    v.real() = node_basis_ * z.real();
    v.imag() = node_basis_ * z.imag();
    const Eigen::MatrixXcd f = (v.array().conjugate() * v.array() * v.array()).matrix();
    Eigen::MatrixXcd g(n, z.cols());
    g.real() = node_basis_.transpose() * f.real();
    g.imag() = node_basis_.transpose() * f.imag();
    out.noalias() += lambda0_ * g;
  }
}

}  // namespace ccsb
