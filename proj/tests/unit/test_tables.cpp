#include <doctest.h>

#include <array>
#include <cmath>

#include "ccsb/oracle.hpp"
#include "ccsb/tables.hpp"

using namespace ccsb;

TEST_CASE("one-body tables: eigenvalues and ladder elements") {
  const auto t = build_tables(5, false);
  CHECK(t.epsilon[0] == doctest::Approx(0.5));
  CHECK(t.epsilon[3] == doctest::Approx(3.5));
  CHECK(t.q(0, 1) == doctest::Approx(std::sqrt(0.5)));
  CHECK(t.q(1, 0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(t.q(2, 3) == doctest::Approx(std::sqrt(1.5)));
  CHECK(t.q(0, 2) == 0.0);
  CHECK(t.q2(0, 0) == doctest::Approx(0.5));
  CHECK(t.q2(0, 2) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(t.q2(2, 0) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(t.q2(0, 1) == 0.0);
  CHECK((t.q - t.q.transpose()).norm() == 0.0);
  CHECK((t.q2 - t.q2.transpose()).norm() == 0.0);
}

TEST_CASE("even-level reduction: physical levels 2i") {
  const auto t = build_tables(3, true);
  CHECK(t.epsilon[0] == doctest::Approx(0.5));
  CHECK(t.epsilon[1] == doctest::Approx(2.5));   // physical level 2
  CHECK(t.epsilon[3] == doctest::Approx(6.5));   // physical level 6
  CHECK(t.q.norm() == 0.0);                      // Q never connects even to even
  // <0|Q^2|2> in physical levels sits at internal (0,1)
  CHECK(t.q2(0, 1) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(t.q2(1, 1) == doctest::Approx(2.5));
  CHECK(t.q2(0, 2) == 0.0);  // physical levels 0 and 4 are four quanta apart
}

TEST_CASE("delta: reference values") {
  const auto t = build_tables(4, false);
  CHECK(t.delta.value(0, 0, 0, 0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-13));
  CHECK(t.delta.value(1, 1, 0, 0) ==
        doctest::Approx(oracle::quadrature_delta(1, 1, 0, 0, 12)).epsilon(1e-12));
  CHECK(t.delta.value(1, 0, 0, 0) == 0.0);
  CHECK(t.delta.value(3, 0, 0, 0) == 0.0);
}

TEST_CASE("delta: total symmetry, parity zeros, quadrature agreement up to 10") {
  const int omega = 10;
  const auto t = build_tables(omega, false);
  const int points = 2 + 2 * omega;  // exactness bound for the largest order sum
  for (int a = 0; a <= omega; ++a)
    for (int b = a; b <= omega; ++b)
      for (int c = b; c <= omega; ++c)
        for (int d = c; d <= omega; ++d) {
          const double v = t.delta.value(a, b, c, d);
          if (((a + b + c + d) & 1) != 0) {
            CHECK(v == 0.0);
            continue;
          }
          const double q = oracle::quadrature_delta(a, b, c, d, points);
          CHECK(std::abs(v - q) <= 1e-10);
          // total symmetry under a few representative permutations
          CHECK(t.delta.value(d, c, b, a) == v);
          CHECK(t.delta.value(b, a, d, c) == v);
          CHECK(t.delta.value(c, a, d, b) == v);
        }
}

TEST_CASE("delta for even-only tables uses physical orders") {
  const auto even = build_tables(2, true);   // physical levels 0, 2, 4
  const auto full = build_tables(4, false);
  // internal (1,1,0,0) of the even table = physical (2,2,0,0)
  CHECK(even.delta.value(1, 1, 0, 0) ==
        doctest::Approx(full.delta.value(2, 2, 0, 0)).epsilon(1e-14));
  // internal odd index sum maps to an even physical sum and must not vanish
  CHECK(even.delta.value(1, 0, 0, 0) ==
        doctest::Approx(full.delta.value(2, 0, 0, 0)).epsilon(1e-14));
}

TEST_CASE("level cap is enforced") {
  CHECK_THROWS_AS(build_tables(61, false), ConfigError);
  CHECK_THROWS_AS(build_tables(31, true), ConfigError);  // physical 62
  CHECK_NOTHROW(build_tables(30, true, /*with_delta=*/false));
}

TEST_CASE("high-order delta stays finite and accurate") {
  // near the cap the double factorials are enormous; the exact-integer route
  // must still deliver clean doubles
  const auto t = build_tables(16, false, /*with_delta=*/true);
  const double v = t.delta.value(16, 16, 16, 16);
  CHECK(std::isfinite(v));
  CHECK(std::abs(v - oracle::quadrature_delta(16, 16, 16, 16, 40)) <= 1e-10);
}

TEST_CASE("delta canonical iteration is sorted and complete") {
  const auto t = build_tables(3, false);
  int count = 0;
  std::array<int, 4> prev{-1, -1, -1, -1};
  t.delta.for_each_canonical([&](int a, int b, int c, int d, double) {
    ++count;
    CHECK(a <= b);
    CHECK(b <= c);
    CHECK(c <= d);
    const std::array<int, 4> cur{a, b, c, d};
    CHECK(prev < cur);
    prev = cur;
  });
  // sorted 4-tuples over 4 values with even sum
  int expect = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = a; b <= 3; ++b)
      for (int c = b; c <= 3; ++c)
        for (int d = c; d <= 3; ++d)
          if (((a + b + c + d) & 1) == 0) ++expect;
  CHECK(count == expect);
}
