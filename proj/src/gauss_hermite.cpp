#include "ccsb/gauss_hermite.hpp"

#include <lapacke.h>

#include <cmath>
#include <vector>

#include "ccsb/types.hpp"

namespace ccsb {

GaussHermiteRule gauss_hermite(int n) {
  require(n >= 1, "gauss_hermite: need at least one node");
  // Jacobi matrix of the Hermite recurrence: zero diagonal, off-diagonal
  // beta_i = sqrt(i/2).
  std::vector<double> diag(n, 0.0), off(std::max(0, n - 1));
  for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(0.5 * i);
  std::vector<double> vec(static_cast<size_t>(n) * n);
  const int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(), off.data(), vec.data(), n);
  if (info != 0) throw NumericsError("gauss_hermite: dstev failed");
  GaussHermiteRule rule;
  rule.x = Eigen::Map<Eigen::VectorXd>(diag.data(), n);
  rule.w.resize(n);
  const double mu0 = std::sqrt(M_PI);  // integral of the weight
  for (int i = 0; i < n; ++i) {
    const double v0 = vec[static_cast<size_t>(i) * n];  // first component of eigenvector i
    rule.w[i] = mu0 * v0 * v0;
  }
  return rule;
}

void oscillator_eigenfunctions(double q, int max_level, double* out) {
  const double phi0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * q * q);
  out[0] = phi0;
  if (max_level == 0) return;
  out[1] = std::sqrt(2.0) * q * phi0;
  for (int a = 1; a < max_level; ++a) {
    out[a + 1] = std::sqrt(2.0 / (a + 1.0)) * q * out[a] - std::sqrt(a / (a + 1.0)) * out[a - 1];
  }
}

Eigen::VectorXd oscillator_eigenfunctions(double q, int max_level) {
  Eigen::VectorXd phi(max_level + 1);
  oscillator_eigenfunctions(q, max_level, phi.data());
  return phi;
}

}  // namespace ccsb
