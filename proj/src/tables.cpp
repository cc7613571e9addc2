#include "ccsb/tables.hpp"

#include <algorithm>
#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <vector>

namespace ccsb {

namespace {

using boost::multiprecision::cpp_int;
using bigfloat = boost::multiprecision::cpp_bin_float_50;

// Physicists' Hermite coefficient lists, index = power of Q. H_n has only
// powers of the same parity as n; zero entries are kept for direct indexing.
std::vector<std::vector<cpp_int>> hermite_coefficients(int max_order) {
  std::vector<std::vector<cpp_int>> h(max_order + 1);
  h[0] = {cpp_int(1)};
  if (max_order >= 1) h[1] = {cpp_int(0), cpp_int(2)};
  for (int n = 1; n < max_order; ++n) {
    std::vector<cpp_int> next(n + 2, cpp_int(0));
    for (int k = 0; k <= n; ++k) {
      if (h[n][k] == 0) continue;
      next[k + 1] += 2 * h[n][k];
    }
    for (int k = 0; k < n; ++k) {
      if (h[n - 1][k] == 0) continue;
      next[k] -= 2 * n * h[n - 1][k];
    }
    h[n + 1] = std::move(next);
  }
  return h;
}

// Polynomial product; both factors have pure parity, so the inner loop
// strides over the populated powers only.
std::vector<cpp_int> convolve(const std::vector<cpp_int>& a, const std::vector<cpp_int>& b) {
  std::vector<cpp_int> out(a.size() + b.size() - 1, cpp_int(0));
  const size_t a0 = (a.size() - 1) % 2;  // parity of populated powers
  const size_t b0 = (b.size() - 1) % 2;
  for (size_t i = a0; i < a.size(); i += 2) {
    if (a[i] == 0) continue;
    for (size_t j = b0; j < b.size(); j += 2) {
      if (b[j] == 0) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

}  // namespace

DeltaTable::DeltaTable(int omega, bool even_only) : omega_(omega), even_only_(even_only) {
  const int max_order = even_only ? 2 * omega : omega;
  const auto hermite = hermite_coefficients(max_order);

  // (2tau-1)!! and 4^k up to the largest needed moment.
  const int tau_max = 2 * max_order;
  std::vector<cpp_int> dfact(tau_max + 1), pow4(tau_max + 1);
  dfact[0] = 1;  // (-1)!! = 1
  pow4[0] = 1;
  for (int t = 1; t <= tau_max; ++t) {
    dfact[t] = dfact[t - 1] * (2 * t - 1);
    pow4[t] = pow4[t - 1] * 4;
  }

  // Factorials and the bigfloat constants of the closed form.
  std::vector<cpp_int> fact(max_order + 1);
  fact[0] = 1;
  for (int k = 1; k <= max_order; ++k) fact[k] = fact[k - 1] * k;
  const bigfloat pi = boost::multiprecision::acos(bigfloat(-1));
  const bigfloat front = sqrt(pi / 2) / pi;

  // Pair products H_a H_b for a <= b, physical orders.
  const int n = omega + 1;
  std::vector<std::vector<cpp_int>> pair(static_cast<size_t>(n) * n);
  auto pair_at = [&](int a, int b) -> std::vector<cpp_int>& {
    return pair[static_cast<size_t>(a) * n + b];
  };
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const int pa = even_only ? 2 * a : a;
      const int pb = even_only ? 2 * b : b;
      pair_at(a, b) = convolve(hermite[pa], hermite[pb]);
    }

  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int c = b; c < n; ++c)
        for (int d = c; d < n; ++d) {
          const int pa = even_only ? 2 * a : a;
          const int pb = even_only ? 2 * b : b;
          const int pc = even_only ? 2 * c : c;
          const int pd = even_only ? 2 * d : d;
          const int order_sum = pa + pb + pc + pd;
          if (order_sum % 2 != 0) continue;  // odd integrand -> exact zero
          const auto prod = convolve(pair_at(a, b), pair_at(c, d));
          // bracket = sum_tau c_{2tau} (2tau-1)!!/4^tau, taken to a common
          // denominator 4^T so the numerator is one exact integer.
          const int big_tau = order_sum / 2;
          cpp_int numerator = 0;
          for (int tau = 0; tau <= big_tau; ++tau) {
            const cpp_int& coeff = prod[2 * static_cast<size_t>(tau)];
            if (coeff == 0) continue;
            numerator += coeff * dfact[tau] * pow4[big_tau - tau];
          }
          const cpp_int norm2 = (cpp_int(1) << order_sum) * fact[pa] * fact[pb] * fact[pc] * fact[pd];
          const bigfloat value = front * bigfloat(numerator) /
                                 (bigfloat(pow4[big_tau]) * sqrt(bigfloat(norm2)));
          values_.emplace(pack(a, b, c, d), static_cast<double>(value));
        }
}

double DeltaTable::value(int a, int b, int c, int d) const {
  if (!even_only_ && ((a + b + c + d) & 1) != 0) return 0.0;  // odd physical order sum
  std::array<int, 4> idx{a, b, c, d};
  std::sort(idx.begin(), idx.end());
  const auto it = values_.find(pack(idx[0], idx[1], idx[2], idx[3]));
  require(it != values_.end(), "delta table: index out of range");
  return it->second;
}

void DeltaTable::for_each_canonical(
    const std::function<void(int, int, int, int, double)>& fn) const {
  std::vector<uint32_t> keys;
  keys.reserve(values_.size());
  for (const auto& kv : values_) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end(), [](uint32_t x, uint32_t y) {
    // sort by (a,b,c,d) tuple order
    const auto flip = [](uint32_t k) {
      return (k & 0xffu) << 24 | (k & 0xff00u) << 8 | (k >> 8 & 0xff00u) >> 8 << 8 |
             (k >> 24);
    };
    return flip(x) < flip(y);
  });
  for (uint32_t k : keys) {
    fn(static_cast<int>(k & 0xffu), static_cast<int>(k >> 8 & 0xffu),
       static_cast<int>(k >> 16 & 0xffu), static_cast<int>(k >> 24), values_.at(k));
  }
}

MatrixElementTables build_tables(int omega, bool even_only, bool with_delta) {
  require(omega >= 0, "build_tables: omega must be non-negative");
  const int max_level = even_only ? 2 * omega : omega;
  require(max_level <= 60, "build_tables: physical level above 60 is not supported");

  MatrixElementTables t;
  t.omega = omega;
  t.even_only = even_only;
  const int n = omega + 1;

  t.epsilon.resize(n);
  for (int i = 0; i < n; ++i) t.epsilon[i] = t.physical_level(i) + 0.5;

  t.q = Eigen::MatrixXd::Zero(n, n);
  if (!even_only) {
    for (int a = 0; a + 1 < n; ++a) {
      t.q(a, a + 1) = std::sqrt(0.5 * (a + 1));  // <a|Q|a+1>
      t.q(a + 1, a) = t.q(a, a + 1);
    }
  }

  t.q2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int p = t.physical_level(i);
    t.q2(i, i) = p + 0.5;
    const int pj = p + 2;  // level two quanta up; adjacent index in both layouts
    const int j = even_only ? i + 1 : i + 2;
    if (j < n) {
      t.q2(i, j) = 0.5 * std::sqrt(static_cast<double>(pj) * (pj - 1));
      t.q2(j, i) = t.q2(i, j);
    }
  }

  if (with_delta) t.delta = DeltaTable(omega, even_only);
  return t;
}

}  // namespace ccsb
