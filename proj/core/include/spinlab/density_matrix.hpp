#pragma once

#include <vector>

#include "spinlab/operators.hpp"

namespace spinlab {

/// 2^n x 2^n Hermitian unit-trace state. The deviation view rho - I/2^n is
/// the only part visible to NMR detection.
struct DensityMatrix {
  Eigen::MatrixXcd rho;

  int dim() const { return static_cast<int>(rho.rows()); }
  int spins() const;

  Eigen::VectorXd populations() const;
  Eigen::MatrixXcd deviation() const;

  bool is_hermitian(double tol = 1e-12) const;
  bool is_unit_trace(double tol = 1e-12) const;
  /// Smallest eigenvalue; physically prepared states stay >= -1e-10.
  double min_eigenvalue() const;

  static DensityMatrix basis_state(int n, int index);
  static DensityMatrix maximally_mixed(int n);
  static DensityMatrix from_deviation(const Eigen::MatrixXcd& dev);
};

/// High-temperature thermal state, uniform polarization a = hbar*omega/2kT:
/// populations (1 + a * sum_i sign_i) / 2^n, first order in a. For n = 3
/// this is the familiar {1+3a, 1+a, 1+a, 1-a, 1+a, 1-a, 1-a, 1-3a}/8
/// pattern. Requires 0 <= a < 1/n so every population stays positive.
DensityMatrix thermal_state(const SpinSystem& sys, double a);

/// Heteronuclear variant with one polarization per spin, same first-order
/// form: populations (1 + sum_i a_i sign_i) / 2^n.
DensityMatrix thermal_state(const SpinSystem& sys,
                            const std::vector<double>& a);

/// Unitary propagation rho -> e^{-iHt} rho e^{+iHt}. H in rad/s, t >= 0.
/// Takes the elementwise-phase shortcut when H is diagonal. Throws
/// NumericError for non-Hermitian H.
DensityMatrix evolve(const DensityMatrix& rho, const Operator& h, double t);
DensityMatrix evolve(const DensityMatrix& rho, const Eigen::VectorXd& h_diag,
                     double t);

/// Transverse relaxation: element (r, c) decays at the sum of 1/T2_i over
/// spins whose bits differ between r and c. Populations are untouched.
DensityMatrix dephase(const DensityMatrix& rho, const SpinSystem& sys,
                      double t);

/// The 2^(n-1)-dimensional block of rho where `label_spin` is fixed to
/// `value`, reported raw (with its trace) and trace-renormalized.
struct SubspaceBlock {
  Eigen::MatrixXcd block;
  double weight;                 // trace of the raw block
  Eigen::MatrixXcd renormalized; // block / weight
};
SubspaceBlock subspace_block(const DensityMatrix& rho, int label_spin,
                             int value);

/// Effective-pure view of a labeled subspace: the block with its diagonal
/// shifted to unit trace and scaled by the deviation magnitude a/2, so that
/// an ideally labeled state yields exactly |00><00|. This is the
/// normalization used when quoting subspace populations.
Eigen::MatrixXcd labeled_block_state(const DensityMatrix& rho, int label_spin,
                                     int value, double a);

}  // namespace spinlab
