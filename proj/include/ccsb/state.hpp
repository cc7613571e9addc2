#pragma once

#include "ccsb/types.hpp"

namespace ccsb {

// Full dynamical state: K configurations in structure-of-arrays form
// (labels as columns, amplitudes, actions) plus the simulation clock.
struct WavefunctionState {
  Eigen::MatrixXcd z;      // modes x K
  Eigen::VectorXcd amp;    // D_k
  Eigen::VectorXd action;  // S_k
  double t = 0.0;

  int num_modes() const { return static_cast<int>(z.rows()); }
  int num_configs() const { return static_cast<int>(z.cols()); }

  static WavefunctionState from_basis(const Eigen::MatrixXcd& basis,
                                      const Eigen::VectorXcd& amplitudes) {
    require(basis.cols() == amplitudes.size(), "state: basis/amplitude size mismatch");
    WavefunctionState s;
    s.z = basis;
    s.amp = amplitudes;
    s.action = Eigen::VectorXd::Zero(basis.cols());
    return s;
  }
};

}  // namespace ccsb
