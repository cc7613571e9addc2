#include <doctest.h>

#include <cmath>

#include "ccsb/observables.hpp"
#include "ccsb/overlaps.hpp"
#include "ccsb/sampling.hpp"

using namespace ccsb;

TEST_CASE("gaussian mode sampling: concentration, mean, determinism") {
  SUBCASE("huge sigma collapses onto the centre") {
    RandomStream rng(derive_stream_seed(11, 0));
    const cplx z0(0.4, -1.2);
    const auto z = sample_gaussian_mode(z0, 1e12, 200, rng);
    for (int k = 0; k < z.size(); ++k) CHECK(std::abs(z[k] - z0) < 1e-5);
  }
  SUBCASE("sample mean within 3 standard errors at the tunnelling centre") {
    const int k_count = 10000;
    const cplx z0 = label_from_qp(-2.5, 0.0);
    RandomStream rng(derive_stream_seed(12, 0));
    const auto z = sample_gaussian_mode(z0, 1.0, k_count, rng);
    const cplx mean = z.mean();
    const double se = std::sqrt(0.5) / std::sqrt(static_cast<double>(k_count));
    CHECK(std::abs(mean.real() - z0.real()) < 3 * se);
    CHECK(std::abs(mean.imag() - z0.imag()) < 3 * se);
  }
  SUBCASE("identical seeds give bit-identical sequences") {
    RandomStream a(derive_stream_seed(99, 3)), b(derive_stream_seed(99, 3));
    const auto za = sample_gaussian_mode(cplx(1, 1), 2.0, 50, a);
    const auto zb = sample_gaussian_mode(cplx(1, 1), 2.0, 50, b);
    CHECK((za - zb).norm() == 0.0);
  }
}

TEST_CASE("gamma mode sampling") {
  SUBCASE("vacuum mode at huge compression stays at the vacuum") {
    RandomStream rng(derive_stream_seed(5, 1));
    const auto z = sample_gamma_mode(0, 1e9, 1000, rng);
    for (int k = 0; k < z.size(); ++k) CHECK(std::norm(z[k]) < 1e-6);
  }
  SUBCASE("occupied mode mean |z|^2 = (n+1) sigma within 3 standard errors") {
    const int k_count = 10000, n = 19;
    RandomStream rng(derive_stream_seed(5, 2));
    const auto z = sample_gamma_mode(n, 1.0, k_count, rng);
    double mean = 0.0;
    for (int k = 0; k < z.size(); ++k) mean += std::norm(z[k]);
    mean /= k_count;
    const double se = std::sqrt(static_cast<double>(n + 1)) / std::sqrt(double(k_count));
    CHECK(std::abs(mean - 20.0) < 3 * se);
  }
  SUBCASE("empty mode piles up at zero regardless of sigma") {
    // exponential law: ~63% of draws fall below the scale
    for (double sigma : {0.5, 4.0, 1000.0}) {
      RandomStream rng(derive_stream_seed(6, 4));
      const auto z = sample_gamma_mode(0, sigma, 10000, rng);
      const double scale = 1.0 / sigma;
      int below = 0;
      for (int k = 0; k < z.size(); ++k)
        if (std::norm(z[k]) < scale) ++below;
      CHECK(below > 5500);
      CHECK(below < 7100);
    }
  }
  SUBCASE("phase is uniform: mean phase vector is small") {
    RandomStream rng(derive_stream_seed(6, 5));
    const auto z = sample_gamma_mode(3, 1.0, 10000, rng);
    cplx dir(0, 0);
    for (int k = 0; k < z.size(); ++k) dir += z[k] / std::abs(z[k]);
    CHECK(std::abs(dir) / 10000.0 < 0.03);
  }
}

TEST_CASE("build_initial_basis is deterministic and shaped by the spec") {
  SamplingSpec spec;
  spec.k_configs = 40;
  spec.seed = 1234;
  spec.sigma_occupied = 1.0;
  spec.sigma_empty = 100.0;
  spec.sigma_tunnelling = 1.0;
  spec.initial_occupation = {3, 0, 0};
  spec.has_tunnelling_mode = true;
  spec.q0 = -2.5;
  const auto z1 = build_initial_basis(spec);
  const auto z2 = build_initial_basis(spec);
  CHECK(z1.rows() == 4);
  CHECK(z1.cols() == 40);
  CHECK((z1 - z2).norm() == 0.0);
  SamplingSpec other = spec;
  other.seed = 1235;
  CHECK((z1 - build_initial_basis(other)).norm() != 0.0);
}

TEST_CASE("projection: exact self-projection at K = 1") {
  // basis = the target itself (all n = 0 -> target is the vacuum z = 0)
  Eigen::MatrixXcd basis(2, 1);
  basis.setZero();
  const Occupation n = {0, 0};
  const auto b = target_overlaps_fock(basis, n);
  const auto res = project_initial_amplitudes(overlap_matrix(basis), b, 1e-10, false);
  CHECK(std::abs(res.amp[0] - cplx(1, 0)) < 1e-12);
  CHECK(res.achieved_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.rank == 1);
}

TEST_CASE("projection: duplicated configuration flags rank deficiency but reproduces target") {
  SamplingSpec spec;
  spec.k_configs = 6;
  spec.seed = 77;
  spec.sigma_empty = 10.0;
  spec.initial_occupation = {2, 0};
  auto basis = build_initial_basis(spec);
  basis.col(3) = basis.col(2);  // exact duplicate
  const auto b = target_overlaps_fock(basis, spec.initial_occupation);
  const auto gram = overlap_matrix(basis);
  const auto res = project_initial_amplitudes(gram, b, 1e-10, false);
  CHECK(res.rank < 6);
  const Eigen::VectorXcd reproduced = gram * res.amp;
  CHECK((reproduced - b).norm() <= 1e-8 * std::max(1.0, b.norm()));
}

TEST_CASE("projection quality at reference trap settings (N=100, Omega=26, K=150)") {
  SamplingSpec spec;
  spec.k_configs = 150;
  spec.seed = 20260809;
  spec.sigma_occupied = 1.0;
  spec.sigma_empty = 1e9;
  spec.initial_occupation.assign(27, 0);
  spec.initial_occupation[0] = 100;
  const auto basis = build_initial_basis(spec);
  const auto b = target_overlaps_fock(basis, spec.initial_occupation);
  const auto res = project_initial_amplitudes(overlap_matrix(basis), b, 1e-10, false);
  CHECK(res.achieved_norm >= 0.95);
  CHECK(res.achieved_norm <= 1.0 + 1e-6);  // projection onto a subspace
  CHECK(res.fidelity >= 0.99);
}

TEST_CASE("projected state particle number matches the occupation within 2 percent") {
  SamplingSpec spec;
  spec.k_configs = 150;
  spec.seed = 31337;
  spec.sigma_occupied = 1.0;
  spec.sigma_empty = 1e7;
  spec.initial_occupation.assign(8, 0);
  spec.initial_occupation[0] = 20;
  const auto basis = build_initial_basis(spec);
  const auto b = target_overlaps_fock(basis, spec.initial_occupation);
  const auto res = project_initial_amplitudes(overlap_matrix(basis), b, 1e-10, false);

  const auto state = WavefunctionState::from_basis(basis, res.amp);
  const auto [norm, number] = norm_and_particle_number(state, 0);
  CHECK(number / norm == doctest::Approx(20.0).epsilon(0.02));
}

TEST_CASE("app-1 shaped projection reaches high fidelity") {
  SamplingSpec spec;
  spec.k_configs = 400;
  spec.seed = 555;
  spec.sigma_tunnelling = 1.0;
  spec.sigma_occupied = 1.0;
  spec.sigma_empty = 100.0;
  spec.initial_occupation.assign(6, 0);
  spec.initial_occupation[0] = 3;
  spec.has_tunnelling_mode = true;
  spec.q0 = -2.5;
  const auto basis = build_initial_basis(spec);
  const auto b =
      target_overlaps_tunnelling_fock(basis, spec.tunnelling_centre(), spec.initial_occupation);
  const auto res = project_initial_amplitudes(overlap_matrix(basis), b, 1e-10, false);
  CHECK(res.fidelity >= 0.99);
  CHECK(res.achieved_norm <= 1.0 + 1e-6);
}
