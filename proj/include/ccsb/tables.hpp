#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <unordered_map>

#include "ccsb/types.hpp"

// Harmonic-oscillator matrix elements used by both Hamiltonian models:
//   epsilon^(a)        = a + 1/2
//   Q^(a,b)            = <a|Q|b>   (first neighbours)
//   Q2^(a,b)           = <a|Q^2|b> (diagonal and second neighbours)
//   delta^(a,b,c,d)    = <a,b|delta(Q-Q')|c,d>
//                      = integral of four oscillator eigenfunctions.
//
// With even_only set, table index i stands for the physical level 2i (the
// even-level reduction used by the system-bath application); Q vanishes
// identically there since it only connects neighbouring levels.
//
// delta is computed from exact integer Hermite-coefficient products: the
// four coefficient lists are convolved in arbitrary-precision integers, the
// even-power moments are summed with (2tau-1)!!/4^tau weights as one exact
// integer ratio, and conversion to double happens last.
namespace ccsb {

class DeltaTable {
 public:
  DeltaTable() = default;
  DeltaTable(int omega, bool even_only);

  // Total symmetry and parity handled here: sorts the indices, returns 0
  // for odd index sums without a lookup.
  double value(int a, int b, int c, int d) const;

  int omega() const { return omega_; }
  std::size_t stored_entries() const { return values_.size(); }

  // Canonical (sorted-index, even-sum) entries in deterministic order.
  void for_each_canonical(const std::function<void(int, int, int, int, double)>& fn) const;

 private:
  static uint32_t pack(int a, int b, int c, int d) {
    return static_cast<uint32_t>(a) | static_cast<uint32_t>(b) << 8 |
           static_cast<uint32_t>(c) << 16 | static_cast<uint32_t>(d) << 24;
  }
  int omega_ = -1;
  bool even_only_ = false;  // physical orders 2i: no odd index sums exist
  std::unordered_map<uint32_t, double> values_;
};

struct MatrixElementTables {
  int omega = 0;          // highest stored mode index
  bool even_only = false; // index i <-> physical level (even_only ? 2i : i)
  Eigen::VectorXd epsilon;
  Eigen::MatrixXd q;
  Eigen::MatrixXd q2;
  DeltaTable delta;

  int physical_level(int index) const { return even_only ? 2 * index : index; }
};

// Builds all four tables for mode indices 0..omega. The physical level may
// not exceed 60: beyond that the double factorials of the closed form leave
// double-precision range, and the cap is enforced rather than degraded.
// with_delta=false skips the two-body table for consumers that only need
// the one-body elements.
MatrixElementTables build_tables(int omega, bool even_only, bool with_delta = true);

}  // namespace ccsb
