#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "spinlab/density_matrix.hpp"
#include "spinlab/operators.hpp"

using namespace spinlab;

namespace {
const SpinSystem kSys = SpinSystem::bromotrifluoroethylene();
constexpr double kTwoPi = 2.0 * M_PI;
}

TEST_CASE("uncoupling offsets halve the couplings to the label") {
  const Frame f = uncoupling_offsets(kSys, 0);
  CHECK(f.delta_hz[0] == 0.0);
  CHECK(f.delta_hz[1] == doctest::Approx(61.05).epsilon(1e-14));
  CHECK(f.delta_hz[2] == doctest::Approx(-37.50).epsilon(1e-14));

  SpinSystem uncoupled = kSys;
  uncoupled.j_hz(0, 1) = uncoupled.j_hz(1, 0) = 0.0;
  uncoupled.j_hz(0, 2) = uncoupled.j_hz(2, 0) = 0.0;
  const Frame g = uncoupling_offsets(uncoupled, 0);
  CHECK(g.delta_hz == std::vector<double>{0.0, 0.0, 0.0});

  SpinSystem two;
  two.labels = {"1", "2"};
  two.offset_hz = {0.0, 0.0};
  two.j_hz = Eigen::MatrixXd::Zero(2, 2);
  two.j_hz(0, 1) = two.j_hz(1, 0) = 53.8;
  two.t2_s = {6.0, 6.0};
  CHECK(uncoupling_offsets(two, 0).delta_hz[1] == doctest::Approx(-26.9).epsilon(1e-14));
}

TEST_CASE("uncoupling-frame Hamiltonian splits into label blocks") {
  const Frame f = uncoupling_offsets(kSys, 0);
  const Eigen::VectorXd d = hamiltonian_diagonal(kSys, f);

  // |0>_A block: pure J_BC coupling, eigenvalues 2 pi J_BC (+-1/4).
  const double q = kTwoPi * 53.8 / 4.0;
  CHECK(d(0) == doctest::Approx(q).epsilon(1e-12));
  CHECK(d(1) == doctest::Approx(-q).epsilon(1e-12));
  CHECK(d(2) == doctest::Approx(-q).epsilon(1e-12));
  CHECK(d(3) == doctest::Approx(q).epsilon(1e-12));

  // |1>_A block keeps the leftover -J_AB IzB - J_AC IzC terms:
  // <100|H|100> - <000|H|000> = -pi (J_AB + J_AC).
  const double gap = d(4) - d(0);
  CHECK(gap == doctest::Approx(-M_PI * (-122.1 + 75.0)).epsilon(1e-12));

  // Same numbers from the projector form
  // 2 pi [ (1/2 + IzA) J_BC IzB IzC
  //        + (1/2 - IzA)(J_BC IzB IzC - J_AB IzB - J_AC IzC) ].
  const Operator iza = embedded_spin(3, 0, Axis::Z);
  const Operator izb = embedded_spin(3, 1, Axis::Z);
  const Operator izc = embedded_spin(3, 2, Axis::Z);
  const Operator eye = Operator::Identity(8, 8);
  const Operator projector_form =
      kTwoPi * ((0.5 * eye + iza) * (53.8 * izb * izc) +
                (0.5 * eye - iza) *
                    (53.8 * izb * izc + 122.1 * izb - 75.0 * izc));
  CHECK(max_abs(build_hamiltonian(kSys, f) - projector_form) < 1e-9);
}

TEST_CASE("zero offsets reproduce the resonant-frame Hamiltonian") {
  const Frame zero{{0.0, 0.0, 0.0}};
  CHECK(max_abs(build_hamiltonian(kSys, zero) -
                build_hamiltonian(kSys, Frame::resonant(kSys))) == 0.0);
}

TEST_CASE("free evolution in the uncoupling frame never couples the blocks") {
  const Frame f = uncoupling_offsets(kSys, 0);
  const Eigen::VectorXd d = hamiltonian_diagonal(kSys, f);

  SpinSystem bc;
  bc.labels = {"B", "C"};
  bc.offset_hz = {0.0, 0.0};
  bc.j_hz = Eigen::MatrixXd::Zero(2, 2);
  bc.j_hz(0, 1) = bc.j_hz(1, 0) = 53.8;
  bc.t2_s = {6.0, 6.0};
  const Eigen::VectorXd d_bc = hamiltonian_diagonal(bc, Frame::resonant(bc));

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> dist(0.0, 0.25);
  for (int i = 0; i < 100; ++i) {
    const double t = dist(rng);
    const Operator u = diagonal_propagator(d, t);
    const Operator u_bc = diagonal_propagator(d_bc, t);
    CHECK(max_abs(u.topLeftCorner(4, 4) - u_bc) < 1e-12);
    CHECK(max_abs(u.topRightCorner(4, 4)) == 0.0);
    CHECK(max_abs(u.bottomLeftCorner(4, 4)) == 0.0);
  }
}

TEST_CASE("states in the label-|0> subspace stay there under B/C pulses") {
  const Frame f = uncoupling_offsets(kSys, 0);
  const Eigen::VectorXd d = hamiltonian_diagonal(kSys, f);

  // A state supported on the |0>_A block only.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  m(0, 0) = 0.5;
  m(1, 1) = 0.25;
  m(0, 1) = m(1, 0) = 0.2;
  m(2, 2) = 0.25;
  DensityMatrix rho{m};

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> delay(0.0, 0.02);
  for (int step = 0; step < 40; ++step) {
    const int spin = 1 + (step % 2);
    const Axis axis = (step % 3 == 0) ? Axis::X : Axis::Y;
    const Operator u = rotation_unitary(kSys, spin, axis, angle(rng));
    rho = DensityMatrix{u * rho.rho * u.adjoint()};
    rho = evolve(rho, d, delay(rng));
  }
  double leak = 0.0;
  for (int r = 4; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) leak = std::max(leak, std::abs(rho.rho(r, c)));
  }
  CHECK(leak < 1e-12);
}

TEST_CASE("frame changes shift coherence frequencies by the offset") {
  // A coherence of spin B evolves at a frequency that moves by exactly the
  // frame offset when the frame changes.
  const Operator ix = embedded_spin(3, 1, Axis::X);
  const DensityMatrix rho{DensityMatrix::maximally_mixed(3).rho + 0.1 * ix};

  auto phase_of_element = [&](const Frame& fr, double t) {
    const DensityMatrix out = evolve(rho, hamiltonian_diagonal(kSys, fr), t);
    return std::arg(out.rho(2, 0));  // |010><000|
  };
  const double t = 1e-3;
  const Frame resonant = Frame::resonant(kSys);
  Frame shifted = resonant;
  shifted.delta_hz[1] = 17.0;
  const double dphi = phase_of_element(shifted, t) - phase_of_element(resonant, t);
  // Element (2,0) = |a 1 c><a 0 c| picks up exp(-i 2 pi delta t).
  CHECK(std::remainder(dphi + kTwoPi * 17.0 * t, kTwoPi) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Populations are frame-independent.
  const DensityMatrix a = evolve(rho, hamiltonian_diagonal(kSys, resonant), t);
  const DensityMatrix b = evolve(rho, hamiltonian_diagonal(kSys, shifted), t);
  CHECK(max_abs(Eigen::MatrixXcd((a.populations() - b.populations()).cast<Complex>().asDiagonal())) < 1e-14);
}
