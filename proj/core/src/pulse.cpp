#include "spinlab/pulse.hpp"

#include <cmath>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

void ShapedPulse::validate(const SpinSystem& sys) const {
  if (spin < 0 || spin >= sys.size()) throw ParseError("unknown spin index");
  if (!(duration_s > 0.0)) throw ParseError("pulse duration must be positive");
  if (!amplitude_rad_s &&
      (!(flip_angle_rad > 0.0) || flip_angle_rad > kTwoPi)) {
    throw ParseError("flip angle must lie in (0, 2*pi]");
  }
  if (envelope == Envelope::Gaussian && !(truncation_sigmas > 0.0)) {
    throw ParseError("gaussian truncation must be positive");
  }
}

double phase_for_axis(Axis axis) {
  switch (axis) {
    case Axis::X: return 0.0;
    case Axis::Y: return -M_PI / 2.0;
    case Axis::MinusX: return M_PI;
    case Axis::MinusY: return M_PI / 2.0;
    default: throw ParseError("RF pulses rotate about transverse axes only");
  }
}

double envelope_value(const ShapedPulse& p, double t) {
  if (t < 0.0 || t > p.duration_s) return 0.0;
  if (p.envelope == Envelope::Rectangular) return 1.0;
  const double sigma = p.duration_s / (2.0 * p.truncation_sigmas);
  const double x = (t - p.duration_s / 2.0) / sigma;
  return std::exp(-0.5 * x * x);
}

double envelope_area(const ShapedPulse& p) {
  if (p.envelope == Envelope::Rectangular) return p.duration_s;
  const double sigma = p.duration_s / (2.0 * p.truncation_sigmas);
  return sigma * std::sqrt(kTwoPi) * std::erf(p.truncation_sigmas / std::sqrt(2.0));
}

namespace {

struct RfTerm {
  int spin;                 // spin seeing this field
  double detuning_rad_s;    // RF carrier minus this spin's frame
  double phase_rad;
  double amplitude_rad_s;   // peak omega_1
  const ShapedPulse* pulse; // envelope source
};

// H(t) = H_frame + sum over terms of
//   w1(t) [cos(det*t + phase) I_x - sin(det*t + phase) I_y].
Operator slice_hamiltonian(const Eigen::VectorXd& h_diag,
                           const std::vector<RfTerm>& terms,
                           const std::vector<Operator>& ix,
                           const std::vector<Operator>& iy, double t) {
  Operator h = h_diag.cast<Complex>().asDiagonal();
  for (const auto& term : terms) {
    const double w1 = term.amplitude_rad_s * envelope_value(*term.pulse, t);
    if (w1 == 0.0) continue;
    const double psi = term.detuning_rad_s * t + term.phase_rad;
    h += w1 * std::cos(psi) * ix[term.spin];
    h -= w1 * std::sin(psi) * iy[term.spin];
  }
  return h;
}

Operator integrate_slices(const Eigen::VectorXd& h_diag,
                          const std::vector<RfTerm>& terms,
                          const std::vector<Operator>& ix,
                          const std::vector<Operator>& iy, double duration,
                          int slices) {
  const int dim = static_cast<int>(h_diag.size());
  const double dt = duration / slices;
  Operator u = Operator::Identity(dim, dim);
  for (int k = 0; k < slices; ++k) {
    const double t_mid = (k + 0.5) * dt;
    const Operator h = slice_hamiltonian(h_diag, terms, ix, iy, t_mid);
    u = hermitian_propagator(h, dt) * u;
  }
  return u;
}

// Nearest unitary (polar factor); the Richardson combination below is
// unitary only up to its own error, this restores it to rounding.
Operator polar_unitary(const Operator& m) {
  Eigen::JacobiSVD<Operator> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

Operator pulse_propagator(const SpinSystem& sys, const Frame& frame,
                          const std::vector<ShapedPulse>& pulses,
                          const IntegrationSettings& settings) {
  if (pulses.empty()) throw ParseError("pulse event without pulses");
  const double duration = pulses.front().duration_s;
  std::vector<bool> targeted(sys.size(), false);
  for (const auto& p : pulses) {
    p.validate(sys);
    if (p.duration_s != duration) {
      throw ParseError("simultaneous pulses must share one duration");
    }
    if (targeted[p.spin]) throw ParseError("simultaneous pulses must target distinct spins");
    targeted[p.spin] = true;
  }
  if (frame.size() != sys.size()) throw ParseError("frame has wrong number of offsets");

  const int n = sys.size();
  std::vector<Operator> ix(n), iy(n);
  for (int j = 0; j < n; ++j) {
    ix[j] = embedded_spin(n, j, Axis::X);
    iy[j] = embedded_spin(n, j, Axis::Y);
  }

  // Every spin sees every RF field, shifted by the carrier-to-frame
  // frequency difference (rotating-wave approximation).
  std::vector<RfTerm> terms;
  for (const auto& p : pulses) {
    const double amp =
        p.amplitude_rad_s ? *p.amplitude_rad_s : p.flip_angle_rad / envelope_area(p);
    const double carrier_hz =
        sys.offset_hz[p.spin] + frame.delta_hz[p.spin] + p.carrier_offset_hz;
    for (int j = 0; j < n; ++j) {
      const double seen_hz = sys.offset_hz[j] + frame.delta_hz[j];
      terms.push_back({j, kTwoPi * (carrier_hz - seen_hz), p.phase_rad, amp, &p});
    }
  }

  const Eigen::VectorXd h_diag = hamiltonian_diagonal(sys, frame);

  // Second-order midpoint slices, Richardson-extrapolated across one
  // doubling; the doubling loop stops when the extrapolated result moves by
  // less than the tolerance.
  int slices = settings.initial_slices;
  Operator coarse = integrate_slices(h_diag, terms, ix, iy, duration, slices);
  Operator fine = integrate_slices(h_diag, terms, ix, iy, duration, 2 * slices);
  Operator best = polar_unitary(((4.0 * fine) - coarse) / 3.0);
  while (true) {
    if (4 * slices > settings.max_slices) {
      throw NumericError("pulse integration did not converge within the slice budget");
    }
    coarse = fine;
    slices *= 2;
    fine = integrate_slices(h_diag, terms, ix, iy, duration, 2 * slices);
    const Operator next = polar_unitary(((4.0 * fine) - coarse) / 3.0);
    const double change = max_abs(next - best);
    best = next;
    if (change < settings.tolerance) return best;
  }
}

Operator pulse_propagator(const SpinSystem& sys, const Frame& frame,
                          const ShapedPulse& pulse,
                          const IntegrationSettings& settings) {
  return pulse_propagator(sys, frame, std::vector<ShapedPulse>{pulse}, settings);
}

double simulated_flip_angle(const ShapedPulse& pulse) {
  SpinSystem one;
  one.labels = {"s"};
  one.offset_hz = {0.0};
  one.j_hz = Eigen::MatrixXd::Zero(1, 1);
  one.t2_s = {1.0};
  ShapedPulse p = pulse;
  p.spin = 0;
  p.carrier_offset_hz = 0.0;
  p.phase_rad = 0.0;
  const Operator u = pulse_propagator(one, Frame::resonant(one), p);
  // exp(-i theta I_x): |U01| = sin(theta/2), Re U00 = cos(theta/2).
  return 2.0 * std::atan2(std::abs(u(0, 1)), u(0, 0).real());
}

double calibrate_amplitude(const SpinSystem& sys, const Frame& frame,
                           const ShapedPulse& pulse_template,
                           double target_angle_rad) {
  (void)sys;
  (void)frame;
  if (!(target_angle_rad > 0.0) || target_angle_rad > M_PI) {
    throw ParseError("calibration target angle must lie in (0, pi]");
  }
  ShapedPulse p = pulse_template;
  p.flip_angle_rad = target_angle_rad;

  const double area = envelope_area(p);
  double amp = target_angle_rad / area;  // exact for a commuting on-resonance drive

  auto angle_at = [&](double a) {
    p.amplitude_rad_s = a;
    return simulated_flip_angle(p);
  };

  double f = angle_at(amp) - target_angle_rad;
  if (std::abs(f) <= 1e-6) return amp;

  // Bracket around the area estimate, then bisect/secant.
  double lo = amp, hi = amp;
  double flo = f, fhi = f;
  for (int tries = 0; (flo > 0.0) == (fhi > 0.0); ++tries) {
    if (tries > 60) throw NumericError("amplitude calibration found no bracket");
    if (f > 0.0) {
      lo /= 1.5;
      flo = angle_at(lo) - target_angle_rad;
    } else {
      hi *= 1.5;
      fhi = angle_at(hi) - target_angle_rad;
    }
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = angle_at(mid) - target_angle_rad;
    if (std::abs(fm) <= 1e-6) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  throw NumericError("amplitude calibration did not converge");
}

}  // namespace spinlab
