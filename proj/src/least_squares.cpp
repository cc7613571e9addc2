#include "ccsb/least_squares.hpp"

#include <lapacke.h>

#include <vector>

namespace ccsb {

RegularizedSolution solve_amplitude_system_destructive(Eigen::MatrixXcd& matrix,
                                                       const Eigen::VectorXcd& rhs,
                                                       double svd_cutoff) {
  const lapack_int n = static_cast<lapack_int>(matrix.rows());
  require(matrix.cols() == n, "solve_amplitude_system: matrix must be square");
  require(rhs.size() == n, "solve_amplitude_system: rhs size mismatch");
  require(svd_cutoff >= 0.0 && svd_cutoff < 1.0, "solve_amplitude_system: cutoff in [0,1)");

  Eigen::VectorXcd b = rhs;
  std::vector<double> sv(static_cast<size_t>(n));
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_zgelsd(
      LAPACK_COL_MAJOR, n, n, 1, reinterpret_cast<lapack_complex_double*>(matrix.data()), n,
      reinterpret_cast<lapack_complex_double*>(b.data()), n, sv.data(), svd_cutoff, &rank);
  if (info != 0) throw NumericsError("solve_amplitude_system: SVD failed to converge");
  if (rank == 0) throw NumericsError("solve_amplitude_system: basis degenerate (rank 0)");

  RegularizedSolution out;
  out.x = std::move(b);
  out.rank = static_cast<int>(rank);
  out.sigma_max = sv[0];
  const double smin = sv[static_cast<size_t>(rank) - 1];
  out.condition = smin > 0.0 ? sv[0] / smin : 0.0;
  return out;
}

RegularizedSolution solve_amplitude_system(const Eigen::MatrixXcd& matrix,
                                           const Eigen::VectorXcd& rhs, double svd_cutoff) {
  Eigen::MatrixXcd scratch = matrix;
  return solve_amplitude_system_destructive(scratch, rhs, svd_cutoff);
}

}  // namespace ccsb
