#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "spinlab/errors.hpp"
#include "spinlab/grover.hpp"
#include "spinlab/tomography.hpp"

using namespace spinlab;

namespace {
const SpinSystem kSys = SpinSystem::bromotrifluoroethylene();

// Labeled Bell pair in the |0>_A subspace: labeling, then y90 on B and a
// block CNOT from B to C (y90/delay/x90 on C) in the uncoupling frame.
DensityMatrix labeled_epr_state(double a, const ErrorModel& errors = {}) {
  SimulationOptions opt;
  opt.errors = errors;
  SequenceSimulator sim(kSys, Frame::resonant(kSys), opt);
  DensityMatrix rho = thermal_state(kSys, a);
  sim.run(rho, labeling_sequence(kSys));
  sim.apply(rho, SequenceEvent::frame_shift(uncoupling_offsets(kSys, 0)));
  sim.apply(rho, SequenceEvent::pulse({1}, Axis::Y, 90.0));
  sim.apply(rho, SequenceEvent::pulse({2}, Axis::Y, 90.0));
  sim.apply(rho, SequenceEvent::delay(1.0 / (2.0 * 53.8)));
  sim.apply(rho, SequenceEvent::pulse({2}, Axis::X, 90.0));
  return rho;
}
}  // namespace

TEST_CASE("tomographer design is well conditioned") {
  const Tomographer tomo(kSys, uncoupling_offsets(kSys, 0));
  CHECK(tomo.experiments() == 27);
  CHECK(tomo.condition_number() < 50.0);
  CHECK(tomo.condition_number() >= 1.0);
}

TEST_CASE("tomography reconstructs random deviation matrices") {
  const Tomographer tomo(kSys, uncoupling_offsets(kSys, 0));
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd dev =
        oracle::random_traceless_hermitian(8, rng, 2e-3);
    const auto res = tomo.reconstruct(DensityMatrix::from_deviation(dev));
    CHECK(deviation_error_norm(res.deviation, dev) < 1e-8);
  }
}

TEST_CASE("tomography of the thermal state returns its diagonal deviation") {
  const DensityMatrix rho = thermal_state(kSys, 0.01);
  const auto res = full_tomography(rho, kSys, Frame::resonant(kSys));
  CHECK(max_abs(res.deviation - rho.deviation()) < 1e-12);
}

TEST_CASE("tomography of the identity reconstructs zero") {
  const auto res = full_tomography(DensityMatrix::maximally_mixed(3), kSys,
                                   uncoupling_offsets(kSys, 0));
  CHECK(max_abs(res.deviation) < 1e-12);
}

TEST_CASE("labeled Bell pair shows the uncoupled-subspace structure") {
  const double a = 0.01;
  const DensityMatrix rho = labeled_epr_state(a);
  const auto res =
      full_tomography(rho, kSys, uncoupling_offsets(kSys, 0));

  CHECK(deviation_error_norm(res.deviation, rho.deviation()) < 1e-8);

  // Normalized |0>_A block is the Bell state: four corners of magnitude
  // 1/2, and no coherence between the label subspaces.
  const Eigen::MatrixXcd eff = labeled_block_state(
      DensityMatrix::from_deviation(res.deviation), 0, 0, a);
  for (int r : {0, 3}) {
    for (int c : {0, 3}) {
      CHECK(std::abs(eff(r, c)) == doctest::Approx(0.5).epsilon(1e-8));
    }
  }
  CHECK(std::abs(eff(1, 1)) < 1e-8);
  CHECK(std::abs(eff(2, 2)) < 1e-8);

  double cross = 0.0;
  Eigen::MatrixXcd normalized = res.deviation / (a / 2.0);
  for (int r = 0; r < 4; ++r) {
    for (int c = 4; c < 8; ++c) {
      cross = std::max(cross, std::abs(normalized(r, c)));
    }
  }
  CHECK(cross < 1e-10);
}

TEST_CASE("pulse errors leave a visible state error") {
  const double a = 0.01;
  const DensityMatrix ideal = labeled_epr_state(a);
  ErrorModel err;
  err.flip_angle_error = 0.02;
  const DensityMatrix off = labeled_epr_state(a, err);
  const double norm = deviation_error_norm(off.deviation(), ideal.deviation());
  CHECK(norm > 1e-3);
  CHECK(norm < 0.5);
}

TEST_CASE("deviation error norm basics") {
  std::mt19937 rng(77);
  const Eigen::MatrixXcd dev = oracle::random_traceless_hermitian(8, rng);
  CHECK(deviation_error_norm(dev, dev) == 0.0);
  CHECK(deviation_error_norm(0.9 * dev, dev) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(deviation_error_norm(dev, Eigen::MatrixXcd::Zero(8, 8)),
                  NumericError);
  CHECK_THROWS_AS(deviation_error_norm(dev, Eigen::MatrixXcd::Zero(4, 4)),
                  ParseError);
}
