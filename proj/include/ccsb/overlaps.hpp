#pragma once

#include "ccsb/types.hpp"

// Multimode coherent-state overlaps and Fock-state projections.
//
// <a|b> = exp( sum_m [ conj(a_m) b_m - |a_m|^2/2 - |b_m|^2/2 ] ).
// The exponent is accumulated over all modes and exponentiated once.
namespace ccsb {

// log <a|b>; cheaper building block for K x K passes.
cplx overlap_exponent(const ModeVector& a, const ModeVector& b);

cplx overlap(const ModeVector& a, const ModeVector& b);

// log <z|n> for a Fock state |n>, returned as (log-magnitude, phase).
// <z|n> = prod_m e^{-|z_m|^2/2} conj(z_m)^{n_m} / sqrt(n_m!), evaluated
// entirely in the log domain (lgamma for the factorials) so occupations of
// order 100 stay representable. A zero label with n_m > 0 gives
// log-magnitude -inf (an exact zero), not an error.
cplx log_fock_overlap(const ModeVector& z, const Occupation& n);

// exp() of a log-domain value produced by log_fock_overlap.
inline cplx from_log(cplx log_value) {
  return std::exp(log_value.real()) * cplx(std::cos(log_value.imag()), std::sin(log_value.imag()));
}

inline cplx fock_overlap(const ModeVector& z, const Occupation& n) {
  return from_log(log_fock_overlap(z, n));
}

// G(k,l) = <z_k|z_l> for the configuration columns of z.
Eigen::MatrixXcd overlap_matrix(const Eigen::MatrixXcd& z);

}  // namespace ccsb
