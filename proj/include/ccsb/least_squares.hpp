#pragma once

#include "ccsb/types.hpp"

// Regularized solve of the amplitude system. Minimum-norm least-squares via
// SVD; singular values below svd_cutoff * sigma_max are discarded. The
// matrix is <z_k|z_l> e^{i S_l}, which the e^{iS} column phases keep
// non-Hermitian in general.
namespace ccsb {

struct RegularizedSolution {
  Eigen::VectorXcd x;
  int rank = 0;
  double condition = 0.0;  // sigma_max / sigma_min over the kept spectrum
  double sigma_max = 0.0;
};

// Throws NumericsError when every singular value falls below the cutoff
// (degenerate basis) and ConfigError on shape mismatch.
RegularizedSolution solve_amplitude_system(const Eigen::MatrixXcd& matrix,
                                           const Eigen::VectorXcd& rhs, double svd_cutoff);

// In-place variant: consumes the matrix buffer (the K x K assembly is
// rebuilt every evaluation, so the propagator lets the factorization
// destroy it).
RegularizedSolution solve_amplitude_system_destructive(Eigen::MatrixXcd& matrix,
                                                       const Eigen::VectorXcd& rhs,
                                                       double svd_cutoff);

}  // namespace ccsb
