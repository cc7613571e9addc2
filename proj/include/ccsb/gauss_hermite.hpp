#pragma once

#include <Eigen/Dense>

// Gauss-Hermite quadrature (weight e^{-x^2}) and harmonic-oscillator
// eigenfunctions. Shared by the Hamiltonian models, the position-space
// density, and the quadrature reference for the two-body table.
namespace ccsb {

struct GaussHermiteRule {
  Eigen::VectorXd x;  // nodes
  Eigen::VectorXd w;  // weights for integrand f(x) e^{-x^2}
};

// Golub-Welsch nodes/weights; exact for polynomials of degree <= 2n-1.
GaussHermiteRule gauss_hermite(int n);

// Orthonormal oscillator eigenfunctions phi_0..phi_max_level at position q,
// phi_a(q) = (2^a a!)^{-1/2} pi^{-1/4} e^{-q^2/2} H_a(q), H_a physicists'
// Hermite. Stable normalized upward recurrence; never touches raw
// polynomial values, so it stays finite at high level.
void oscillator_eigenfunctions(double q, int max_level, double* out);

Eigen::VectorXd oscillator_eigenfunctions(double q, int max_level);

}  // namespace ccsb
