#include "spinlab/tomography.hpp"

#include <cmath>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {
const Complex kI{0.0, 1.0};

// Traceless Hermitian basis: diagonal differences against the last state,
// then symmetric and antisymmetric pair matrices. dim^2 - 1 elements.
std::vector<Eigen::MatrixXcd> traceless_hermitian_basis(int dim) {
  std::vector<Eigen::MatrixXcd> basis;
  for (int m = 0; m + 1 < dim; ++m) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(dim, dim);
    b(m, m) = 1.0;
    b(dim - 1, dim - 1) = -1.0;
    basis.push_back(b);
  }
  for (int r = 0; r < dim; ++r) {
    for (int c = r + 1; c < dim; ++c) {
      Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
      s(r, c) = 1.0;
      s(c, r) = 1.0;
      basis.push_back(s);
      Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim, dim);
      k(r, c) = kI;
      k(c, r) = -kI;
      basis.push_back(k);
    }
  }
  return basis;
}

int pow3(int n) {
  int p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

}  // namespace

Tomographer::Tomographer(const SpinSystem& sys, const Frame& frame,
                         const AcquisitionSettings& acq)
    : sys_(sys), frame_(frame), acq_(acq) {
  acq_.readout_pulse = false;  // the experiment set supplies the tipping
  const int n = sys.size();
  const int dim = sys.dim();
  num_experiments_ = pow3(n);

  // Read-out combination e applies, per spin, one of nothing / x90 / y90.
  for (int e = 0; e < num_experiments_; ++e) {
    Operator u = Operator::Identity(dim, dim);
    int code = e;
    for (int spin = 0; spin < n; ++spin) {
      const int d = code % 3;
      code /= 3;
      if (d == 1) u = rotation_unitary(sys, spin, Axis::X, M_PI / 2.0) * u;
      if (d == 2) u = rotation_unitary(sys, spin, Axis::Y, M_PI / 2.0) * u;
    }
    readouts_.push_back(u);
  }

  basis_ = traceless_hermitian_basis(dim);

  // Every experiment yields one complex single-quantum amplitude per
  // transition line: (U rho U+)[lower, upper]. Rows are its real and
  // imaginary parts as linear functionals of the deviation components.
  int rows = 0;
  for (int spin = 0; spin < n; ++spin) {
    rows += static_cast<int>(channel_lines(sys, frame_, spin).size());
  }
  rows *= 2 * num_experiments_;
  design_.resize(rows, static_cast<int>(basis_.size()));

  int row = 0;
  for (int e = 0; e < num_experiments_; ++e) {
    std::vector<Eigen::MatrixXcd> conjugated;
    conjugated.reserve(basis_.size());
    for (const auto& b : basis_) {
      conjugated.push_back(readouts_[e] * b * readouts_[e].adjoint());
    }
    for (int spin = 0; spin < n; ++spin) {
      for (const auto& line : channel_lines(sys, frame_, spin)) {
        for (size_t m = 0; m < basis_.size(); ++m) {
          const Complex a = conjugated[m](line.lower, line.upper);
          design_(row, static_cast<int>(m)) = a.real();
          design_(row + 1, static_cast<int>(m)) = a.imag();
        }
        row += 2;
      }
    }
  }

  svd_.compute(design_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd_.singularValues();
  condition_ = sv(0) / sv(sv.size() - 1);
}

Eigen::VectorXd Tomographer::measure(const DensityMatrix& rho) const {
  const int n = sys_.size();
  std::vector<int> all_spins(n);
  for (int i = 0; i < n; ++i) all_spins[i] = i;

  Eigen::VectorXd measured(design_.rows());
  int row = 0;
  for (int e = 0; e < num_experiments_; ++e) {
    const DensityMatrix tipped{readouts_[e] * rho.rho *
                               readouts_[e].adjoint()};
    const Fid fid = simulate_fid(tipped, sys_, frame_, all_spins, acq_);
    for (int spin = 0; spin < n; ++spin) {
      const auto lines = channel_lines(sys_, frame_, spin);
      const auto amps = fit_line_amplitudes(fid, spin, lines, sys_);
      for (const auto& a : amps) {
        measured(row) = a.real();
        measured(row + 1) = a.imag();
        row += 2;
      }
    }
  }
  return measured;
}

Tomographer::Result Tomographer::reconstruct(const DensityMatrix& rho) const {
  const auto& sv = svd_.singularValues();
  if (sv(sv.size() - 1) < 1e-10 * sv(0)) {
    throw NumericError("tomography design matrix is rank deficient (condition " +
                       std::to_string(condition_) + ")");
  }
  const Eigen::VectorXd x = svd_.solve(measure(rho));
  const int dim = sys_.dim();
  Eigen::MatrixXcd dev = Eigen::MatrixXcd::Zero(dim, dim);
  for (size_t m = 0; m < basis_.size(); ++m) {
    dev += x(static_cast<int>(m)) * basis_[m];
  }
  return {dev, condition_};
}

Tomographer::Result full_tomography(const DensityMatrix& rho,
                                    const SpinSystem& sys, const Frame& frame,
                                    const AcquisitionSettings& acq) {
  return Tomographer(sys, frame, acq).reconstruct(rho);
}

double deviation_error_norm(const Eigen::MatrixXcd& rho_exp,
                            const Eigen::MatrixXcd& rho_th) {
  if (rho_exp.rows() != rho_th.rows() || rho_exp.cols() != rho_th.cols()) {
    throw ParseError("deviation matrices have different shapes");
  }
  const double ref = rho_th.norm();
  if (ref == 0.0) throw NumericError("zero-norm reference deviation matrix");
  return (rho_exp - rho_th).norm() / ref;
}

}  // namespace spinlab
