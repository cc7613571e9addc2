#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Core value types shared by every module. Units are atomic units with
// m = omega = hbar = 1 throughout, so the coherent-state width gamma = 1
// and labels follow the convention z = (q + i p) / sqrt(2).
namespace ccsb {

using cplx = std::complex<double>;
using ModeVector = Eigen::VectorXcd;   // one coherent-state label per mode
using Occupation = std::vector<int>;   // one occupation number per mode

inline constexpr double kCoherentWidth = 1.0;  // gamma = m*omega/hbar

// q/p centres of a label.
inline cplx label_from_qp(double q, double p) { return cplx(q, p) / std::sqrt(2.0); }
inline double label_q(cplx z) { return std::sqrt(2.0) * z.real(); }
inline double label_p(cplx z) { return std::sqrt(2.0) * z.imag(); }

// One term of the wavefunction ansatz: label vector, amplitude, classical action.
struct Configuration {
  ModeVector z;
  cplx amp{1.0, 0.0};
  double action = 0.0;
};

// Thrown for invalid run setup (bad sizes, out-of-range parameters, bad config files).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a numerical contract is violated (degenerate solve, residues, guards).
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

inline int total_particles(const Occupation& n) {
  int total = 0;
  for (int v : n) {
    if (v < 0) throw ConfigError("occupation numbers must be non-negative");
    total += v;
  }
  return total;
}

}  // namespace ccsb
