#pragma once

#include <memory>

#include "ccsb/tables.hpp"
#include "ccsb/types.hpp"

// Normal-ordered Hamiltonian models. evaluate(a, b) returns Hbar(a*, b):
// the bra labels are passed unconjugated and conjugated internally.
// gradient(z) is d Hbar / d z* at equal arguments, the generator of the
// label trajectories. evaluate_diag(z) computes Hbar(z*, z) by real
// arithmetic, so its imaginary part is exactly zero by construction.
namespace ccsb {

class NormalOrderedHamiltonian {
 public:
  virtual ~NormalOrderedHamiltonian() = default;

  virtual int num_modes() const = 0;
  // First mode index counted by the particle-number operator (skips the
  // distinguishable tunnelling mode in the system-bath model).
  virtual int particle_mode_offset() const { return 0; }

  virtual cplx evaluate(const ModeVector& bra, const ModeVector& ket) const = 0;
  virtual double evaluate_diag(const ModeVector& z) const = 0;
  virtual ModeVector gradient(const ModeVector& z) const = 0;

  // Batch forms used by the propagator's K x K assembly; columns of z are
  // configurations. Defaults loop the scalar calls; models override with
  // matrix-product forms. Both paths are pinned against each other in tests.
  virtual void evaluate_pairs(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const;
  virtual void evaluate_diag_batch(const Eigen::MatrixXcd& z, Eigen::VectorXd& out) const;
  virtual void gradient_batch(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const;
};

// Tunnelling mode in an asymmetric quartic double well, quadratically
// coupled to a second-quantised bath of identical oscillators kept at even
// levels 0, 2, ..., 2*omega. Mode 0 is the tunnelling label; modes
// 1..omega+1 hold the bath levels.
class TunnellingBathModel final : public NormalOrderedHamiltonian {
 public:
  TunnellingBathModel(double eta, double lambda, int omega, int m_total);

  int num_modes() const override { return omega_ + 2; }
  int particle_mode_offset() const override { return 1; }

  cplx evaluate(const ModeVector& bra, const ModeVector& ket) const override;
  double evaluate_diag(const ModeVector& z) const override;
  ModeVector gradient(const ModeVector& z) const override;
  void evaluate_pairs(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const override;
  void evaluate_diag_batch(const Eigen::MatrixXcd& z, Eigen::VectorXd& out) const override;
  void gradient_batch(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const override;

  double eta() const { return eta_; }
  double lambda() const { return lambda_; }
  int omega() const { return omega_; }
  int m_total() const { return m_total_; }
  int bath_bosons() const { return m_total_ - 1; }
  const MatrixElementTables& tables() const { return tables_; }

 private:
  double eta_, lambda_;
  int omega_, m_total_;
  double coupling_;    // lambda/(2 sqrt(2)): matrix element of (lambda/2) q
  double inv_64eta_;
  MatrixElementTables tables_;  // even-only
  Eigen::VectorXcd epsilon_c_;  // complex copies for mixed-type products
  Eigen::MatrixXcd q2_c_;
};

// N interacting bosons in a displaced harmonic trap with a contact
// interaction, expanded over oscillator levels 0..omega.
//
// The two-body contraction is evaluated through Gauss-Hermite nodes: since
// delta^(a,b,c,d) is the integral of four eigenfunctions, the quadruple sum
// factorises into per-node amplitudes, which 2*omega+2 nodes integrate
// exactly. evaluate_reference() keeps the direct loop over the stored
// delta entries for cross-checking.
class TrappedBosonsModel final : public NormalOrderedHamiltonian {
 public:
  TrappedBosonsModel(double xi, double lambda0, int omega, int n_bosons);

  int num_modes() const override { return omega_ + 1; }

  cplx evaluate(const ModeVector& bra, const ModeVector& ket) const override;
  double evaluate_diag(const ModeVector& z) const override;
  ModeVector gradient(const ModeVector& z) const override;
  void evaluate_pairs(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const override;
  void evaluate_diag_batch(const Eigen::MatrixXcd& z, Eigen::VectorXd& out) const override;
  void gradient_batch(const Eigen::MatrixXcd& z, Eigen::MatrixXcd& out) const override;

  cplx evaluate_reference(const ModeVector& bra, const ModeVector& ket) const;

  double xi() const { return xi_; }
  double lambda0() const { return lambda0_; }
  int omega() const { return omega_; }
  int n_bosons() const { return n_bosons_; }
  const MatrixElementTables& tables() const { return tables_; }

 private:
  double xi_, lambda0_;
  int omega_, n_bosons_;
  MatrixElementTables tables_;
  Eigen::MatrixXd one_body_;   // diag(eps + xi^2/2) - xi Q
  Eigen::MatrixXd node_basis_; // (nodes x modes) eigenfunctions with quarter-weights absorbed
  Eigen::MatrixXcd one_body_c_;
  Eigen::MatrixXcd node_basis_c_;
};

}  // namespace ccsb
