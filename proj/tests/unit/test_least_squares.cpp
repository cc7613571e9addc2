#include <doctest.h>

#include <random>

#include "ccsb/least_squares.hpp"

using namespace ccsb;

TEST_CASE("identity system returns the right-hand side") {
  const int n = 8;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b[i] = cplx(i + 0.5, -i);
  const auto res = solve_amplitude_system(a, b, 1e-10);
  CHECK((res.x - b).norm() <= 1e-14 * b.norm());
  CHECK(res.rank == n);
  CHECK(res.condition == doctest::Approx(1.0));
}

TEST_CASE("duplicated-row system: minimum-norm solution matches the pseudo-inverse") {
  // A = [[1, 1], [1, 1]], b = (2, 2): pseudo-inverse solution is (1, 1)
  Eigen::MatrixXcd a(2, 2);
  a << 1, 1, 1, 1;
  Eigen::VectorXcd b(2);
  b << 2, 2;
  const auto res = solve_amplitude_system(a, b, 1e-10);
  CHECK(res.rank == 1);
  CHECK(std::abs(res.x[0] - cplx(1, 0)) <= 1e-12);
  CHECK(std::abs(res.x[1] - cplx(1, 0)) <= 1e-12);
}

TEST_CASE("random well-conditioned system matches a dense direct solve") {
  const int n = 50;
  std::mt19937_64 eng(7777);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cplx(u(eng), u(eng));
  a += 10.0 * Eigen::MatrixXcd::Identity(n, n);  // keep it comfortably regular
  Eigen::VectorXcd b(n);
  for (int i = 0; i < n; ++i) b[i] = cplx(u(eng), u(eng));

  const auto res = solve_amplitude_system(a, b, 1e-12);
  const Eigen::VectorXcd direct = a.fullPivLu().solve(b);
  CHECK((res.x - direct).norm() <= 1e-10 * direct.norm());
  CHECK(res.rank == n);
}

TEST_CASE("degenerate system reports failure") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  Eigen::VectorXcd b = Eigen::VectorXcd::Ones(3);
  CHECK_THROWS_AS(solve_amplitude_system(a, b, 1e-10), NumericsError);
}

TEST_CASE("shape and cutoff validation") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
  Eigen::VectorXcd b = Eigen::VectorXcd::Ones(2);
  CHECK_THROWS_AS(solve_amplitude_system(a, b, 1e-10), ConfigError);
  Eigen::VectorXcd b3 = Eigen::VectorXcd::Ones(3);
  CHECK_THROWS_AS(solve_amplitude_system(a, b3, 1.5), ConfigError);
}

TEST_CASE("cutoff discards small singular directions") {
  // diag(1, 1e-14): the tiny direction must be dropped, giving the
  // minimum-norm solution with x[1] = 0
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1e-14;
  Eigen::VectorXcd b(2);
  b << 1, 1;
  const auto res = solve_amplitude_system(a, b, 1e-10);
  CHECK(res.rank == 1);
  CHECK(std::abs(res.x[0] - cplx(1, 0)) <= 1e-12);
  CHECK(std::abs(res.x[1]) <= 1e-12);
}
