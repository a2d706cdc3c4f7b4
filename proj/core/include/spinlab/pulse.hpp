#pragma once

#include <optional>
#include <vector>

#include "spinlab/operators.hpp"

namespace spinlab {

enum class Envelope { Rectangular, Gaussian };

/// A finite-duration RF pulse on one spin. The carrier sits at the target
/// spin's rotating frame plus carrier_offset_hz; every other spin sees the
/// same field shifted by its frequency difference (rotating-wave
/// approximation, counter-rotating terms dropped).
///
/// Gaussian envelopes are truncated at +/- truncation_sigmas standard
/// deviations, sigma = duration / (2 * truncation_sigmas).
struct ShapedPulse {
  int spin = 0;
  Envelope envelope = Envelope::Gaussian;
  double duration_s = 300e-6;
  double flip_angle_rad = 0.0;
  double phase_rad = 0.0;  // 0 = rotation about +x
  double truncation_sigmas = 3.0;
  double carrier_offset_hz = 0.0;
  /// Peak RF amplitude omega_1 in rad/s; unset means calibrate from the
  /// envelope-area theorem so the on-resonance flip angle matches
  /// flip_angle_rad.
  std::optional<double> amplitude_rad_s;

  void validate(const SpinSystem& sys) const;
};

/// RF phase that rotates about the given axis for an on-resonance pulse
/// (x -> 0, y -> -pi/2, -x -> pi, -y -> +pi/2).
double phase_for_axis(Axis axis);

/// Normalized envelope value at time t in [0, duration] (peak 1).
double envelope_value(const ShapedPulse& p, double t);
/// Integral of the normalized envelope over the pulse, seconds.
double envelope_area(const ShapedPulse& p);

struct IntegrationSettings {
  int initial_slices = 64;
  int max_slices = 1 << 16;
  double tolerance = 1e-8;  // max-norm change on slice doubling
};

/// Propagator of the full system over one pulse (or several simultaneous
/// pulses on distinct spins): frame Hamiltonian plus RF terms, integrated
/// with piecewise-constant slices sampled at midpoints, doubling the slice
/// count until the change drops below tolerance. Throws NumericError if the
/// slice budget is exhausted.
Operator pulse_propagator(const SpinSystem& sys, const Frame& frame,
                          const std::vector<ShapedPulse>& pulses,
                          const IntegrationSettings& settings = {});
Operator pulse_propagator(const SpinSystem& sys, const Frame& frame,
                          const ShapedPulse& pulse,
                          const IntegrationSettings& settings = {});

/// Peak amplitude (rad/s) for which the simulated on-resonance flip angle of
/// the template pulse equals target_angle_rad to 1e-6 rad. Starts from the
/// envelope-area estimate and refines with a bracketed secant iteration.
double calibrate_amplitude(const SpinSystem& sys, const Frame& frame,
                           const ShapedPulse& pulse_template,
                           double target_angle_rad);

/// On-resonance flip angle produced by the pulse on an isolated spin.
double simulated_flip_angle(const ShapedPulse& pulse);

}  // namespace spinlab
