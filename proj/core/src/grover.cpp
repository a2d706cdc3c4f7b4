#include "spinlab/grover.hpp"

#include <cmath>
#include <limits>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {

constexpr int kLabel = 0;
constexpr int kSpinB = 1;
constexpr int kSpinC = 2;

void require_search_system(const SpinSystem& sys) {
  if (sys.size() != 3) {
    throw ParseError("the search sequences are defined for 3 spins");
  }
  if (sys.j_hz(kSpinB, kSpinC) == 0.0) {
    throw ParseError("the computation spins must be coupled");
  }
}

double coupling_delay(const SpinSystem& sys) {
  return 1.0 / (2.0 * std::abs(sys.j_hz(kSpinB, kSpinC)));
}

// Composite-z sandwich pattern for variant v: outer pulses of +/-90 degrees
// about a transverse axis, inner pulse carrying the conditional sign. All
// four give exp(-i theta I_z) on each spin when ideal.
struct ZPattern {
  Axis outer_axis;
  double outer_sign;   // first outer pulse angle = outer_sign * 90deg
  Axis inner_axis;
  double inner_sign;   // inner angle for a +z rotation = inner_sign * theta
};

ZPattern z_pattern(int variant) {
  switch (variant) {
    case 0: return {Axis::Y, +1.0, Axis::X, +1.0};   // y / x / -y
    case 1: return {Axis::Y, -1.0, Axis::X, -1.0};   // -y / -x / y
    case 2: return {Axis::X, +1.0, Axis::Y, -1.0};   // x / -y / -x
    case 3: return {Axis::X, -1.0, Axis::Y, +1.0};   // -x / y / x
    default: throw ParseError("composite-z variant must be 0..3");
  }
}

}  // namespace

PulseSequence grover_oracle_sequence(const SpinSystem& sys, int x0,
                                     int variant) {
  require_search_system(sys);
  if (x0 < 0 || x0 > 3) throw ParseError("x0 must be 0..3");
  const ZPattern zp = z_pattern(variant);
  const double h = zp.outer_sign * 90.0;

  // Conditional phase flip of |x0>: composite z90 rotations on both
  // computation spins plus the 1/(2J) coupled evolution. The z-rotation
  // senses are crossed — the pulse on B is conditioned by x0's C bit and
  // vice versa — because the flip is steered through the IzIz term.
  const double sign_b = (x0 & 1) ? -1.0 : +1.0;
  const double sign_c = (x0 & 2) ? -1.0 : +1.0;
  PulseSequence seq;
  seq.name = "oracle" + std::to_string((x0 >> 1) & 1) + std::to_string(x0 & 1);
  seq.add(SequenceEvent::pulse({kSpinB, kSpinC}, zp.outer_axis, h));
  seq.add(SequenceEvent::pulse(
      {PulseGroup{{kSpinB}, zp.inner_axis, zp.inner_sign * sign_b * 90.0},
       PulseGroup{{kSpinC}, zp.inner_axis, zp.inner_sign * sign_c * 90.0}}));
  seq.add(SequenceEvent::pulse({kSpinB, kSpinC}, zp.outer_axis, -h));
  seq.add(SequenceEvent::delay(coupling_delay(sys)));
  return seq;
}

PulseSequence grover_inversion_sequence(const SpinSystem& sys) {
  require_search_system(sys);
  // Inversion about the average, with the Hadamard sandwich around the f00
  // phase flip reduced to four pulse events and one delay.
  PulseSequence seq;
  seq.name = "inversion";
  seq.add(SequenceEvent::pulse({kSpinB, kSpinC}, Axis::X, 90.0));
  seq.add(SequenceEvent::pulse({kSpinB, kSpinC}, Axis::Y, 90.0));
  seq.add(SequenceEvent::delay(coupling_delay(sys)));
  seq.add(SequenceEvent::pulse({kSpinB, kSpinC}, Axis::Y, -90.0));
  return seq;
}

PulseSequence grover_preparation_sequence(const SpinSystem& sys) {
  require_search_system(sys);
  PulseSequence seq;
  seq.name = "prepare";
  seq.add(SequenceEvent::pulse({kSpinB, kSpinC}, Axis::Y, 90.0));
  return seq;
}

int choose_composite_variant(const SpinSystem& sys,
                             const SimulationOptions& options) {
  require_search_system(sys);
  const Frame frame = uncoupling_offsets(sys, kLabel);

  // Ideal single iteration, as a reference unitary.
  SimulationOptions ideal;
  SequenceSimulator ref_sim(sys, frame, ideal);
  Operator ref = ref_sim.sequence_unitary(grover_inversion_sequence(sys)) *
                 ref_sim.sequence_unitary(grover_oracle_sequence(sys, 0, 0));

  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int v = 0; v < 4; ++v) {
    SequenceSimulator sim(sys, frame, options);
    const Operator u = sim.sequence_unitary(grover_inversion_sequence(sys)) *
                       sim.sequence_unitary(grover_oracle_sequence(sys, 0, v));
    const double err = phase_distance(u, ref);
    if (err < best_err - 1e-15) {
      best_err = err;
      best = v;
    }
  }
  return best;
}

GroverResult grover_run(const SpinSystem& sys, int x0, int iterations,
                        const GroverOptions& options) {
  require_search_system(sys);
  if (iterations < 0) throw ParseError("iteration count must be >= 0");
  const double a = options.polarization;
  const int variant = options.variant >= 0
                          ? options.variant
                          : choose_composite_variant(sys, options.sim);

  SequenceSimulator sim(sys, Frame::resonant(sys), options.sim);
  DensityMatrix rho = thermal_state(sys, a);
  int pulses = 0;

  if (options.label_first) {
    const PulseSequence label = labeling_sequence(sys);
    sim.run(rho, label);
    pulses += label.pulse_count();
  }
  sim.apply(rho, SequenceEvent::frame_shift(uncoupling_offsets(sys, kLabel)));

  const PulseSequence prep = grover_preparation_sequence(sys);
  sim.run(rho, prep);
  pulses += prep.pulse_count();

  const PulseSequence inversion = grover_inversion_sequence(sys);
  const PulseSequence oracle = grover_oracle_sequence(sys, x0, variant);

  GroverTrace trace;
  trace.variant = variant;
  for (int k = 0; k < iterations; ++k) {
    sim.run(rho, oracle);
    sim.run(rho, inversion);
    pulses += oracle.pulse_count() + inversion.pulse_count();
    const Eigen::MatrixXcd block = labeled_block_state(rho, kLabel, 0, a);
    trace.x0_population.push_back(block(x0, x0).real());
  }
  trace.duration_s = sim.elapsed();
  trace.pulse_count = pulses;
  return {std::move(rho), sim.frame(), std::move(trace)};
}

}  // namespace spinlab
