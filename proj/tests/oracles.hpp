#pragma once

// Independent reference constructions used as test oracles. Everything here
// is built from scratch (explicit Kronecker products, exact Boltzmann sums,
// brute-force 4x4 search unitaries) so tests never lean on the library
// plumbing they are checking.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Matrix id2() { return Matrix::Identity(2, 2); }

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex{0, 0}, Complex{0, -1}, Complex{0, 1}, Complex{0, 0};
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// Single-site operator on `spin` of an n-spin register (spin 0 = most
/// significant bit of the basis index).
inline Matrix on_spin(int n, int spin, const Matrix& local) {
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    out = kron(out, i == spin ? local : id2());
  }
  return out;
}

/// exp(-i angle n.I) for a unit axis (nx, ny, nz), I = sigma/2.
inline Matrix rot(double nx, double ny, double nz, double angle) {
  const Matrix gen = 0.5 * (nx * pauli_x() + ny * pauli_y() + nz * pauli_z());
  return std::cos(angle / 2.0) * id2() -
         Complex{0.0, 1.0} * 2.0 * std::sin(angle / 2.0) * gen;
}

/// Exact Boltzmann populations for per-spin polarizations a_i: the energy of
/// basis state s is -(1/2) sum_i sign_i(s) per unit a_i, so
/// p(s) = exp(sum_i a_i sign_i(s)) / Z with the full exponential kept.
inline std::vector<double> boltzmann_exact(const std::vector<double>& a) {
  const int n = static_cast<int>(a.size());
  const int dim = 1 << n;
  std::vector<double> p(dim);
  double z = 0.0;
  for (int s = 0; s < dim; ++s) {
    double arg = 0.0;
    for (int i = 0; i < n; ++i) {
      const int sign = ((s >> (n - 1 - i)) & 1) ? -1 : +1;
      arg += a[i] * sign;
    }
    p[s] = std::exp(arg);
    z += p[s];
  }
  for (double& v : p) v /= z;
  return p;
}

/// Product-operator rule for a spin prepared along x and coupled to one
/// other spin: <Ix>(t) = <Ix>(0) cos(pi J t) under H = 2 pi J Iz Iz.
inline double ix_under_coupling(double ix0, double j_hz, double t) {
  return ix0 * std::cos(M_PI * j_hz * t);
}

/// Brute-force 4x4 search iteration: conditional sign flip followed by
/// inversion about the uniform superposition.
inline Matrix search_oracle(int x0) {
  Matrix m = Matrix::Identity(4, 4);
  m(x0, x0) = -1.0;
  return m;
}

inline Matrix search_inversion() {
  Matrix psi = Matrix::Constant(4, 1, 0.5);
  return 2.0 * (psi * psi.adjoint()) - Matrix::Identity(4, 4);
}

/// Population of |x0> after k iterations starting from the uniform state.
inline double search_population(int x0, int k) {
  Vector v = Vector::Constant(4, 0.5);
  const Matrix g = search_inversion() * search_oracle(x0);
  for (int i = 0; i < k; ++i) v = g * v;
  return std::norm(v(x0));
}

/// Random traceless Hermitian matrix with entries of order `scale`.
inline Matrix random_traceless_hermitian(int dim, std::mt19937& rng,
                                         double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    m(r, r) = dist(rng);
    for (int c = r + 1; c < dim; ++c) {
      m(r, c) = Complex{dist(rng), dist(rng)};
      m(c, r) = std::conj(m(r, c));
    }
  }
  const Complex tr = m.trace() / static_cast<double>(dim);
  for (int r = 0; r < dim; ++r) m(r, r) -= tr;
  return m;
}

}  // namespace oracle
