#pragma once

#include <complex>

#include <Eigen/Dense>

#include "spinlab/frame.hpp"
#include "spinlab/spin_system.hpp"

namespace spinlab {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

enum class Axis { X, Y, Z, MinusX, MinusY, MinusZ };

/// Parses "x"/"y"/"z"/"-x"/... ; throws ParseError otherwise.
Axis axis_from_string(const std::string& s);
std::string axis_to_string(Axis axis);

/// 2x2 angular momentum component I_axis (half the Pauli matrix).
Operator spin_half(Axis axis);

/// I_axis of one spin embedded in the full 2^n-dimensional space.
Operator embedded_spin(int n, int spin, Axis axis);

/// Single-spin rotation exp(-i angle I_axis), right-hand rule, embedded in
/// the full space of `sys`. Throws ParseError for an unknown spin.
Operator rotation_unitary(const SpinSystem& sys, int spin, Axis axis,
                          double angle_rad);

/// Free-evolution Hamiltonian in the multi-rotating frame, rad/s:
///   H = sum_i 2*pi*delta_i I_zi + sum_{i<j} 2*pi*J_ij I_zi I_zj.
/// The Zeeman terms -omega_i I_zi of the lab Hamiltonian cancel against the
/// frame rotation omega_i + Delta_i exactly, leaving the offsets. Diagonal
/// by construction.
Eigen::VectorXd hamiltonian_diagonal(const SpinSystem& sys,
                                     const Frame& frame);
Operator build_hamiltonian(const SpinSystem& sys, const Frame& frame);

/// exp(-i H t) for a diagonal Hamiltonian given by its diagonal (rad/s).
Operator diagonal_propagator(const Eigen::VectorXd& h_diag, double t);

/// exp(-i H dt) for a general Hermitian H via its eigendecomposition.
Operator hermitian_propagator(const Operator& h, double dt);

// --- small matrix utilities -------------------------------------------------

double max_abs(const Operator& m);
bool is_hermitian(const Operator& m, double tol = 1e-12);
bool is_unitary(const Operator& m, double tol = 1e-12);

/// Divides out the phase of the largest-magnitude entry, the convention used
/// when comparing unitaries up to global phase.
Operator phase_aligned(const Operator& m);

/// Max-norm distance between two matrices after aligning the global phase of
/// each to the convention above.
double phase_distance(const Operator& a, const Operator& b);

}  // namespace spinlab
