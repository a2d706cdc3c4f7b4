#pragma once

#include "spinlab/readout.hpp"

namespace spinlab {

/// Full deviation-density-matrix tomography from 3^n experiments, each
/// applying one of {nothing, x90, y90} per spin before acquisition. All
/// single-quantum line amplitudes are collected and a linear inversion
/// recovers the traceless deviation matrix.
///
/// The design matrix (and its SVD) depends only on the system, frame and
/// acquisition settings, so one Tomographer can reconstruct many states.
class Tomographer {
 public:
  Tomographer(const SpinSystem& sys, const Frame& frame,
              const AcquisitionSettings& acq = {});

  struct Result {
    Eigen::MatrixXcd deviation;  // traceless Hermitian
    double condition_number;
  };

  /// Runs the 3^n simulated experiments on `rho` and inverts. Throws
  /// NumericError if the design matrix is rank-deficient.
  Result reconstruct(const DensityMatrix& rho) const;

  int experiments() const { return num_experiments_; }
  double condition_number() const { return condition_; }

 private:
  Eigen::VectorXd measure(const DensityMatrix& rho) const;

  const SpinSystem& sys_;
  Frame frame_;
  AcquisitionSettings acq_;
  int num_experiments_;
  std::vector<Operator> readouts_;
  std::vector<Eigen::MatrixXcd> basis_;  // traceless Hermitian basis
  Eigen::MatrixXd design_;
  Eigen::BDCSVD<Eigen::MatrixXd> svd_;
  double condition_ = 0.0;
};

/// One-shot helper.
Tomographer::Result full_tomography(const DensityMatrix& rho,
                                    const SpinSystem& sys, const Frame& frame,
                                    const AcquisitionSettings& acq = {});

/// Relative Frobenius error ||exp - th|| / ||th|| between deviation
/// matrices. Throws NumericError on a zero reference.
double deviation_error_norm(const Eigen::MatrixXcd& rho_exp,
                            const Eigen::MatrixXcd& rho_th);

}  // namespace spinlab
