#pragma once

#include "spinlab/sequence.hpp"

namespace spinlab {

/// Search sequences for the two computation spins of a labeled 3-spin
/// system, run in the uncoupling frame so the label spin stays passive.
/// x0 indexes the marked basis state of the 2-spin subspace (0..3, first
/// computation spin = high bit).

/// Conditional phase flip of |x0>: y90 pair, +/-x90 pair encoding x0,
/// -y90 pair, then a 1/(2 J) delay. The composite-z variant (0..3) picks
/// which of the equivalent three-pulse z-rotation patterns is used.
PulseSequence grover_oracle_sequence(const SpinSystem& sys, int x0,
                                     int variant = 0);

/// Inversion about the average, reduced to x90 pair, y90 pair, 1/(2 J)
/// delay, -y90 pair.
PulseSequence grover_inversion_sequence(const SpinSystem& sys);

/// y90 on both computation spins: |00> -> uniform superposition.
PulseSequence grover_preparation_sequence(const SpinSystem& sys);

/// Picks the composite-z variant whose single search iteration deviates
/// least from the ideal one under the given options (ties resolved toward
/// the lowest index, which is the plain y/x/-y pattern).
int choose_composite_variant(const SpinSystem& sys,
                             const SimulationOptions& options);

struct GroverOptions {
  SimulationOptions sim;
  double polarization = 0.01;  // thermal polarization a
  int variant = -1;            // composite-z variant; -1 = choose
  bool label_first = true;     // start from thermal state + labeling
};

struct GroverTrace {
  std::vector<double> x0_population;  // after iteration 1..k
  double duration_s = 0.0;
  int pulse_count = 0;
  int variant = 0;
};

struct GroverResult {
  DensityMatrix state;
  Frame frame;
  GroverTrace trace;
};

/// Full pipeline: thermal state, labeling, switch to the uncoupling frame,
/// superposition prep, then `iterations` oracle+inversion rounds, recording
/// after each one the population of |x0> in the renormalized label-|0>
/// deviation block. Ideal pulses give sin^2((2k+1) pi/6) exactly.
GroverResult grover_run(const SpinSystem& sys, int x0, int iterations,
                        const GroverOptions& options = {});

}  // namespace spinlab
