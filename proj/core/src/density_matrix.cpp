#include "spinlab/density_matrix.hpp"

#include <cmath>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {
const Complex kI{0.0, 1.0};

int log2_dim(int dim) {
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim) throw NumericError("matrix dimension is not a power of two");
  return n;
}
}  // namespace

int DensityMatrix::spins() const { return log2_dim(dim()); }

Eigen::VectorXd DensityMatrix::populations() const {
  return rho.diagonal().real();
}

Eigen::MatrixXcd DensityMatrix::deviation() const {
  const int d = dim();
  return rho - Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
}

bool DensityMatrix::is_hermitian(double tol) const {
  return spinlab::is_hermitian(rho, tol);
}

bool DensityMatrix::is_unit_trace(double tol) const {
  return std::abs(rho.trace() - Complex{1.0, 0.0}) < tol;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::basis_state(int n, int index) {
  const int dim = 1 << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(index, index) = 1.0;
  return {rho};
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  const int dim = 1 << n;
  return {Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim)};
}

DensityMatrix DensityMatrix::from_deviation(const Eigen::MatrixXcd& dev) {
  const int dim = static_cast<int>(dev.rows());
  return {dev + Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim)};
}

DensityMatrix thermal_state(const SpinSystem& sys, double a) {
  return thermal_state(sys, std::vector<double>(sys.size(), a));
}

DensityMatrix thermal_state(const SpinSystem& sys,
                            const std::vector<double>& a) {
  const int n = sys.size();
  if (static_cast<int>(a.size()) != n) {
    throw ParseError("one polarization per spin required");
  }
  double total = 0.0;
  for (double ai : a) {
    if (!(ai >= 0.0)) throw ParseError("polarization must be >= 0");
    total += ai;
  }
  if (!(total < 1.0)) {
    throw ParseError("polarization out of range: sum of a_i must stay below 1");
  }
  const int dim = sys.dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) p += a[i] * spin_sign(s, i, n);
    rho(s, s) = p / static_cast<double>(dim);
  }
  return {rho};
}

DensityMatrix evolve(const DensityMatrix& rho, const Eigen::VectorXd& h_diag,
                     double t) {
  if (t < 0.0) throw NumericError("evolution time must be >= 0");
  const int dim = rho.dim();
  Eigen::VectorXcd phase(dim);
  for (int s = 0; s < dim; ++s) phase(s) = std::exp(-kI * h_diag(s) * t);
  DensityMatrix out{Eigen::MatrixXcd(dim, dim)};
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      out.rho(r, c) = phase(r) * rho.rho(r, c) * std::conj(phase(c));
    }
  }
  return out;
}

DensityMatrix evolve(const DensityMatrix& rho, const Operator& h, double t) {
  if (!spinlab::is_hermitian(h, 1e-10)) {
    throw NumericError("evolution under a non-Hermitian operator");
  }
  const Eigen::MatrixXcd off = h - Eigen::MatrixXcd(h.diagonal().asDiagonal());
  if (max_abs(off) < 1e-15) {
    return evolve(rho, Eigen::VectorXd(h.diagonal().real()), t);
  }
  if (t < 0.0) throw NumericError("evolution time must be >= 0");
  const Operator u = hermitian_propagator(h, t);
  return {u * rho.rho * u.adjoint()};
}

DensityMatrix dephase(const DensityMatrix& rho, const SpinSystem& sys,
                      double t) {
  if (t < 0.0) throw NumericError("dephasing time must be >= 0");
  const int n = sys.size();
  const int dim = sys.dim();
  DensityMatrix out = rho;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      if (r == c) continue;
      double rate = 0.0;
      for (int i = 0; i < n; ++i) {
        if (spin_bit(r, i, n) != spin_bit(c, i, n)) rate += 1.0 / sys.t2_s[i];
      }
      out.rho(r, c) *= std::exp(-t * rate);
    }
  }
  return out;
}

SubspaceBlock subspace_block(const DensityMatrix& rho, int label_spin,
                             int value) {
  const int n = rho.spins();
  if (label_spin < 0 || label_spin >= n) throw ParseError("label spin out of range");
  const int half = 1 << (n - 1);
  // Indices with the label bit fixed, in ascending order of the others.
  std::vector<int> idx;
  idx.reserve(half);
  for (int s = 0; s < rho.dim(); ++s) {
    if (spin_bit(s, label_spin, n) == value) idx.push_back(s);
  }
  SubspaceBlock out;
  out.block.resize(half, half);
  for (int r = 0; r < half; ++r) {
    for (int c = 0; c < half; ++c) out.block(r, c) = rho.rho(idx[r], idx[c]);
  }
  out.weight = out.block.trace().real();
  out.renormalized = out.weight != 0.0
                         ? Eigen::MatrixXcd(out.block / out.weight)
                         : out.block;
  return out;
}

Eigen::MatrixXcd labeled_block_state(const DensityMatrix& rho, int label_spin,
                                     int value, double a) {
  if (!(a > 0.0)) throw NumericError("labeled-block normalization needs a > 0");
  const SubspaceBlock b = subspace_block(rho, label_spin, value);
  const int half = static_cast<int>(b.block.rows());
  const double scale = a / 2.0;
  const double shift = (b.weight - scale) / static_cast<double>(half);
  return (b.block - shift * Eigen::MatrixXcd::Identity(half, half)) / scale;
}

}  // namespace spinlab
