#include "ccsb/sampling.hpp"

#include <cmath>

#include "ccsb/least_squares.hpp"
#include "ccsb/overlaps.hpp"

namespace ccsb {

Eigen::VectorXcd sample_gaussian_mode(cplx z0, double sigma, int k_configs, RandomStream& rng) {
  require(sigma > 0.0, "sample_gaussian_mode: sigma must be positive");
  require(k_configs >= 1, "sample_gaussian_mode: need at least one draw");
  Eigen::VectorXcd out(k_configs);
  const double width = 1.0 / std::sqrt(2.0 * sigma);  // Var(Re) = Var(Im) = 1/(2 sigma)
  for (int k = 0; k < k_configs; ++k) {
    const auto [gx, gy] = rng.normal_pair();
    out[k] = z0 + width * cplx(gx, gy);
  }
  return out;
}

Eigen::VectorXcd sample_gamma_mode(int occupation, double sigma, int k_configs,
                                   RandomStream& rng) {
  require(occupation >= 0, "sample_gamma_mode: occupation must be non-negative");
  require(sigma > 0.0, "sample_gamma_mode: sigma must be positive");
  require(k_configs >= 1, "sample_gamma_mode: need at least one draw");
  const double scale = occupation > 0 ? sigma : 1.0 / sigma;
  Eigen::VectorXcd out(k_configs);
  for (int k = 0; k < k_configs; ++k) {
    const double r = rng.gamma_integer_shape(occupation + 1, scale);  // |z|^2
    const double theta = 2.0 * M_PI * rng.uniform01();
    out[k] = std::sqrt(r) * cplx(std::cos(theta), std::sin(theta));
  }
  return out;
}

Eigen::MatrixXcd build_initial_basis(const SamplingSpec& spec) {
  require(!spec.initial_occupation.empty(), "build_initial_basis: no modes configured");
  const int modes = spec.num_modes();
  Eigen::MatrixXcd z(modes, spec.k_configs);
  int mode = 0;
  if (spec.has_tunnelling_mode) {
    RandomStream rng = RandomStream::for_mode(spec.seed, 0);
    z.row(0) = sample_gaussian_mode(spec.tunnelling_centre(), spec.sigma_tunnelling,
                                    spec.k_configs, rng)
                   .transpose();
    mode = 1;
  }
  for (size_t i = 0; i < spec.initial_occupation.size(); ++i, ++mode) {
    RandomStream rng = RandomStream::for_mode(spec.seed, static_cast<uint64_t>(mode));
    const int n = spec.initial_occupation[i];
    const double sigma = n > 0 ? spec.sigma_occupied : spec.sigma_empty;
    z.row(mode) = sample_gamma_mode(n, sigma, spec.k_configs, rng).transpose();
  }
  return z;
}

ProjectionResult project_initial_amplitudes(const Eigen::MatrixXcd& overlap_gram,
                                            const Eigen::VectorXcd& target_overlaps,
                                            double svd_cutoff, bool renormalize) {
  require(overlap_gram.rows() == overlap_gram.cols(),
          "project_initial_amplitudes: Gram matrix must be square");
  require(overlap_gram.rows() == target_overlaps.size(),
          "project_initial_amplitudes: size mismatch");
  auto solved = solve_amplitude_system(overlap_gram, target_overlaps, svd_cutoff);

  ProjectionResult out;
  out.rank = solved.rank;
  out.condition = solved.condition;
  out.amp = std::move(solved.x);
  out.achieved_norm = (out.amp.adjoint() * overlap_gram * out.amp)(0, 0).real();
  const cplx target_dot = target_overlaps.dot(out.amp);  // <target|Psi(0)>
  out.fidelity = out.achieved_norm > 0.0 ? std::norm(target_dot) / out.achieved_norm : 0.0;
  if (renormalize && out.achieved_norm > 0.0) {
    out.amp /= std::sqrt(out.achieved_norm);
    out.achieved_norm = 1.0;
  }
  return out;
}

Eigen::VectorXcd target_overlaps_fock(const Eigen::MatrixXcd& basis, const Occupation& n) {
  require(basis.rows() == static_cast<Eigen::Index>(n.size()),
          "target_overlaps_fock: occupation length mismatch");
  Eigen::VectorXcd b(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) b[k] = fock_overlap(basis.col(k), n);
  return b;
}

Eigen::VectorXcd target_overlaps_tunnelling_fock(const Eigen::MatrixXcd& basis,
                                                 cplx tunnelling_centre,
                                                 const Occupation& bath_n) {
  require(basis.rows() == static_cast<Eigen::Index>(bath_n.size()) + 1,
          "target_overlaps_tunnelling_fock: mode count mismatch");
  Eigen::VectorXcd b(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    const cplx zk = basis(0, k);
    const cplx gauss = std::exp(std::conj(zk) * tunnelling_centre - 0.5 * std::norm(zk) -
                                0.5 * std::norm(tunnelling_centre));
    b[k] = gauss * fock_overlap(basis.col(k).tail(basis.rows() - 1), bath_n);
  }
  return b;
}

}  // namespace ccsb
