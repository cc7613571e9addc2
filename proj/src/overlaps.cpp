#include "ccsb/overlaps.hpp"

#include <cmath>
#include <limits>

namespace ccsb {

cplx overlap_exponent(const ModeVector& a, const ModeVector& b) {
  require(a.size() == b.size(), "overlap: label vectors differ in length");
  cplx dot(0.0, 0.0);
  double na = 0.0, nb = 0.0;
  for (Eigen::Index m = 0; m < a.size(); ++m) {
    dot += std::conj(a[m]) * b[m];
    na += std::norm(a[m]);
    nb += std::norm(b[m]);
  }
  return dot - 0.5 * (na + nb);
}

cplx overlap(const ModeVector& a, const ModeVector& b) {
  return std::exp(overlap_exponent(a, b));
}

Eigen::MatrixXcd overlap_matrix(const Eigen::MatrixXcd& z) {
  const Eigen::Index k_count = z.cols();
  Eigen::MatrixXcd g = z.adjoint() * z;
  Eigen::VectorXd half_norm(k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) half_norm[k] = 0.5 * g(k, k).real();
#pragma omp parallel for schedule(static)
  for (Eigen::Index l = 0; l < k_count; ++l)
    for (Eigen::Index k = 0; k < k_count; ++k)
      g(k, l) = std::exp(g(k, l) - half_norm[k] - half_norm[l]);
  return g;
}

cplx log_fock_overlap(const ModeVector& z, const Occupation& n) {
  require(static_cast<size_t>(z.size()) == n.size(),
          "log_fock_overlap: label/occupation length mismatch");
  double log_mag = 0.0;
  double phase = 0.0;
  for (Eigen::Index m = 0; m < z.size(); ++m) {
    log_mag -= 0.5 * std::norm(z[m]);
    const int nm = n[static_cast<size_t>(m)];
    if (nm == 0) continue;
    const double r = std::abs(z[m]);
    if (r == 0.0) {
      return cplx(-std::numeric_limits<double>::infinity(), 0.0);
    }
    log_mag += nm * std::log(r) - 0.5 * std::lgamma(static_cast<double>(nm) + 1.0);
    phase -= nm * std::arg(z[m]);  // conj(z)^n
  }
  return cplx(log_mag, phase);
}

}  // namespace ccsb
