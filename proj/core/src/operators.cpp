#include "spinlab/operators.hpp"

#include <cmath>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
const Complex kI{0.0, 1.0};
}  // namespace

Frame Frame::resonant(const SpinSystem& sys) {
  return Frame{std::vector<double>(sys.size(), 0.0)};
}

Frame uncoupling_offsets(const SpinSystem& sys, int label_spin) {
  if (label_spin < 0 || label_spin >= sys.size()) {
    throw ParseError("label spin out of range");
  }
  Frame f = Frame::resonant(sys);
  for (int i = 0; i < sys.size(); ++i) {
    if (i != label_spin) f.delta_hz[i] = -sys.j_hz(label_spin, i) / 2.0;
  }
  return f;
}

Axis axis_from_string(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  if (s == "-x") return Axis::MinusX;
  if (s == "-y") return Axis::MinusY;
  if (s == "-z") return Axis::MinusZ;
  throw ParseError("unknown axis '" + s + "'");
}

std::string axis_to_string(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    case Axis::MinusX: return "-x";
    case Axis::MinusY: return "-y";
    case Axis::MinusZ: return "-z";
  }
  return "?";
}

Operator spin_half(Axis axis) {
  Operator m(2, 2);
  switch (axis) {
    case Axis::X: m << 0, 0.5, 0.5, 0; break;
    case Axis::Y: m << 0, -0.5 * kI, 0.5 * kI, 0; break;
    case Axis::Z: m << 0.5, 0, 0, -0.5; break;
    case Axis::MinusX: return -spin_half(Axis::X);
    case Axis::MinusY: return -spin_half(Axis::Y);
    case Axis::MinusZ: return -spin_half(Axis::Z);
  }
  return m;
}

Operator embedded_spin(int n, int spin, Axis axis) {
  const Operator op = spin_half(axis);
  const int dim = 1 << n;
  Operator out = Operator::Zero(dim, dim);
  // Entry (r, c) is op(b_r, b_c) when all other bits agree.
  const int mask = 1 << (n - 1 - spin);
  for (int r = 0; r < dim; ++r) {
    const int br = (r & mask) ? 1 : 0;
    for (int bc = 0; bc < 2; ++bc) {
      const int c = bc ? (r | mask) : (r & ~mask);
      if (op(br, bc) != 0.0) out(r, c) = op(br, bc);
    }
  }
  return out;
}

Operator rotation_unitary(const SpinSystem& sys, int spin, Axis axis,
                          double angle_rad) {
  if (spin < 0 || spin >= sys.size()) throw ParseError("unknown spin index");
  if (!std::isfinite(angle_rad)) throw ParseError("rotation angle not finite");
  // exp(-i angle I_axis) on one spin: cos(a/2) I - 2 i sin(a/2) I_axis.
  const double half = angle_rad / 2.0;
  const Operator local = std::cos(half) * Operator::Identity(2, 2) -
                         2.0 * kI * std::sin(half) * spin_half(axis);
  const int n = sys.size();
  const int dim = sys.dim();
  const int mask = 1 << (n - 1 - spin);
  Operator out = Operator::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const int br = (r & mask) ? 1 : 0;
    for (int bc = 0; bc < 2; ++bc) {
      const int c = bc ? (r | mask) : (r & ~mask);
      out(r, c) = local(br, bc);
    }
  }
  return out;
}

Eigen::VectorXd hamiltonian_diagonal(const SpinSystem& sys,
                                     const Frame& frame) {
  const int n = sys.size();
  if (frame.size() != n) {
    throw ParseError("frame has wrong number of offsets");
  }
  const int dim = sys.dim();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (int s = 0; s < dim; ++s) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double szi = 0.5 * spin_sign(s, i, n);
      e += kTwoPi * frame.delta_hz[i] * szi;
      for (int j = i + 1; j < n; ++j) {
        e += kTwoPi * sys.j_hz(i, j) * szi * 0.5 * spin_sign(s, j, n);
      }
    }
    diag(s) = e;
  }
  return diag;
}

Operator build_hamiltonian(const SpinSystem& sys, const Frame& frame) {
  return hamiltonian_diagonal(sys, frame).cast<Complex>().asDiagonal();
}

Operator diagonal_propagator(const Eigen::VectorXd& h_diag, double t) {
  const int dim = static_cast<int>(h_diag.size());
  Operator u = Operator::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    u(s, s) = std::exp(-kI * h_diag(s) * t);
  }
  return u;
}

Operator hermitian_propagator(const Operator& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericError("eigendecomposition failed in propagator");
  }
  const auto& v = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(-kI * es.eigenvalues()(i) * dt);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

double max_abs(const Operator& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Operator& m, double tol) {
  return max_abs(m - m.adjoint()) < tol;
}

bool is_unitary(const Operator& m, double tol) {
  const Operator g = m.adjoint() * m;
  return max_abs(g - Operator::Identity(m.rows(), m.cols())) < tol;
}

Operator phase_aligned(const Operator& m) {
  int rmax = 0, cmax = 0;
  double best = -1.0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const double a = std::abs(m(r, c));
      if (a > best) {
        best = a;
        rmax = r;
        cmax = c;
      }
    }
  }
  if (best <= 0.0) return m;
  const Complex phase = m(rmax, cmax) / best;
  return m / phase;
}

double phase_distance(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ParseError("phase comparison of different shapes");
  }
  // Align b's global phase to a at a's largest-magnitude entry. Reusing one
  // reference position keeps the comparison stable when several entries tie
  // in magnitude.
  int rmax = 0, cmax = 0;
  double best = -1.0;
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) {
      if (std::abs(a(r, c)) > best) {
        best = std::abs(a(r, c));
        rmax = r;
        cmax = c;
      }
    }
  }
  if (best <= 0.0 || std::abs(b(rmax, cmax)) < 1e-14 * best) {
    return max_abs(a - b);
  }
  const Complex pa = a(rmax, cmax) / std::abs(a(rmax, cmax));
  const Complex pb = b(rmax, cmax) / std::abs(b(rmax, cmax));
  return max_abs(a - b * (pa / pb));
}

}  // namespace spinlab
