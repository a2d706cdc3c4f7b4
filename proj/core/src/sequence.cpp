#include "spinlab/sequence.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {
const Complex kI{0.0, 1.0};
}

// --- events and sequences ---------------------------------------------------

SequenceEvent SequenceEvent::pulse(std::vector<PulseGroup> groups) {
  SequenceEvent ev;
  ev.kind = Kind::Pulse;
  ev.pulses = std::move(groups);
  return ev;
}

SequenceEvent SequenceEvent::pulse(std::vector<int> spins, Axis axis,
                                   double angle_deg) {
  return pulse({PulseGroup{std::move(spins), axis, angle_deg}});
}

SequenceEvent SequenceEvent::delay(double seconds) {
  SequenceEvent ev;
  ev.kind = Kind::Delay;
  ev.delay_s = seconds;
  return ev;
}

SequenceEvent SequenceEvent::frame_shift(Frame frame) {
  SequenceEvent ev;
  ev.kind = Kind::FrameShift;
  ev.frame = std::move(frame);
  return ev;
}

int SequenceEvent::pulse_count() const {
  int count = 0;
  for (const auto& g : pulses) count += static_cast<int>(g.spins.size());
  return count;
}

void SequenceEvent::validate(const SpinSystem& sys) const {
  switch (kind) {
    case Kind::Delay:
      if (delay_s < 0.0) throw ParseError("negative delay");
      break;
    case Kind::FrameShift:
      if (frame.size() != sys.size()) {
        throw ParseError("frame shift has wrong number of offsets");
      }
      break;
    case Kind::Pulse: {
      if (pulses.empty()) throw ParseError("empty pulse event");
      std::set<int> seen;
      for (const auto& g : pulses) {
        if (g.spins.empty()) throw ParseError("pulse group without spins");
        if (g.angle_deg == 0.0 || !std::isfinite(g.angle_deg)) {
          throw ParseError("malformed pulse angle");
        }
        phase_for_axis(g.axis);  // rejects z
        for (int s : g.spins) {
          if (s < 0 || s >= sys.size()) throw ParseError("unknown spin index");
          if (!seen.insert(s).second) {
            throw ParseError("simultaneous pulses must target disjoint spins");
          }
        }
      }
      break;
    }
  }
}

PulseSequence& PulseSequence::add(SequenceEvent ev) {
  events.push_back(std::move(ev));
  return *this;
}

int PulseSequence::pulse_count() const {
  int count = 0;
  for (const auto& ev : events) count += ev.pulse_count();
  return count;
}

double PulseSequence::ideal_duration() const {
  double total = 0.0;
  for (const auto& ev : events) {
    if (ev.kind == SequenceEvent::Kind::Delay) total += ev.delay_s;
  }
  return total;
}

double PulseSequence::duration_with_pulses(double pulse_length_s) const {
  double total = ideal_duration();
  for (const auto& ev : events) {
    if (ev.kind == SequenceEvent::Kind::Pulse) total += pulse_length_s;
  }
  return total;
}

void PulseSequence::validate(const SpinSystem& sys) const {
  for (const auto& ev : events) ev.validate(sys);
}

// --- error model ------------------------------------------------------------

ErrorModel ErrorModel::from_string(const std::string& text,
                                   const std::string& origin) {
  ErrorModel model;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    std::istringstream key_in(raw.substr(0, eq));
    std::istringstream val_in(raw.substr(eq + 1));
    std::string key, value;
    key_in >> key;
    val_in >> value;
    if (key.empty() || value.empty()) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    try {
      if (key == "flip_angle_error") {
        model.flip_angle_error = std::stod(value);
      } else if (key == "phase_offset_deg") {
        model.phase_offset_rad = std::stod(value) * M_PI / 180.0;
      } else if (key == "use_shaped") {
        if (value == "true" || value == "1") {
          model.use_shaped = true;
        } else if (value == "false" || value == "0") {
          model.use_shaped = false;
        } else {
          throw std::invalid_argument(value);
        }
      } else {
        throw ParseError(origin + ":" + std::to_string(lineno) +
                         ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": bad value '" + value + "' for " + key);
    }
  }
  return model;
}

ErrorModel ErrorModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open error config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

// --- simulator --------------------------------------------------------------

namespace {

// Rotation about the transverse axis at RF phase psi:
// exp(-i theta (cos(psi) I_x - sin(psi) I_y)).
Operator phased_rotation(const SpinSystem& sys, int spin, double psi,
                         double theta) {
  const int n = sys.size();
  const Operator gen = std::cos(psi) * spin_half(Axis::X) -
                       std::sin(psi) * spin_half(Axis::Y);
  const Operator local = std::cos(theta / 2.0) * Operator::Identity(2, 2) -
                         2.0 * kI * std::sin(theta / 2.0) * gen;
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

}  // namespace

SequenceSimulator::SequenceSimulator(const SpinSystem& sys, Frame frame,
                                     SimulationOptions options)
    : sys_(sys), frame_(std::move(frame)), options_(std::move(options)) {
  h_diag_ = hamiltonian_diagonal(sys_, frame_);
}

void SequenceSimulator::set_frame(const Frame& frame) {
  frame_ = frame;
  h_diag_ = hamiltonian_diagonal(sys_, frame_);
}

Operator SequenceSimulator::shaped_event_unitary(const SequenceEvent& event) {
  std::ostringstream key;
  key << std::setprecision(17);
  for (double d : frame_.delta_hz) key << d << ",";
  key << ";" << options_.errors.flip_angle_error << ","
      << options_.errors.phase_offset_rad << ";";
  for (const auto& g : event.pulses) {
    key << axis_to_string(g.axis) << g.angle_deg << "@";
    for (int s : g.spins) key << s << ",";
    key << "|";
  }
  if (auto it = cache_.find(key.str()); it != cache_.end()) return it->second;

  std::vector<ShapedPulse> pulses;
  for (const auto& g : event.pulses) {
    const double scaled =
        radians(g.angle_deg) * (1.0 + options_.errors.flip_angle_error);
    for (int s : g.spins) {
      ShapedPulse p;
      p.spin = s;
      p.envelope = options_.envelope;
      p.duration_s = options_.pulse_duration_s;
      p.truncation_sigmas = options_.truncation_sigmas;
      p.flip_angle_rad = std::abs(scaled);
      p.phase_rad = phase_for_axis(g.axis) + (scaled < 0.0 ? M_PI : 0.0) +
                    options_.errors.phase_offset_rad;
      pulses.push_back(p);
    }
  }
  Operator u = pulse_propagator(sys_, frame_, pulses, options_.integration);
  cache_.emplace(key.str(), u);
  return u;
}

Operator SequenceSimulator::event_unitary(const SequenceEvent& event) {
  event.validate(sys_);
  switch (event.kind) {
    case SequenceEvent::Kind::Delay:
      return diagonal_propagator(h_diag_, event.delay_s);
    case SequenceEvent::Kind::FrameShift:
      set_frame(event.frame);
      return Operator::Identity(sys_.dim(), sys_.dim());
    case SequenceEvent::Kind::Pulse:
      break;
  }
  const bool shaped = options_.shaped_pulses || options_.errors.use_shaped;
  if (shaped) return shaped_event_unitary(event);
  Operator u = Operator::Identity(sys_.dim(), sys_.dim());
  for (const auto& g : event.pulses) {
    const double theta =
        radians(g.angle_deg) * (1.0 + options_.errors.flip_angle_error);
    const double psi =
        phase_for_axis(g.axis) + options_.errors.phase_offset_rad;
    for (int s : g.spins) u = phased_rotation(sys_, s, psi, theta) * u;
  }
  return u;
}

void SequenceSimulator::apply(DensityMatrix& rho, const SequenceEvent& event) {
  event.validate(sys_);
  switch (event.kind) {
    case SequenceEvent::Kind::Delay:
      rho = evolve(rho, h_diag_, event.delay_s);
      if (options_.with_dephasing) rho = dephase(rho, sys_, event.delay_s);
      elapsed_ += event.delay_s;
      return;
    case SequenceEvent::Kind::FrameShift:
      set_frame(event.frame);
      return;
    case SequenceEvent::Kind::Pulse: {
      const bool shaped = options_.shaped_pulses || options_.errors.use_shaped;
      if (shaped && options_.with_dephasing) {
        rho = dephase(rho, sys_, options_.pulse_duration_s / 2.0);
      }
      const Operator u = event_unitary(event);
      rho = DensityMatrix{u * rho.rho * u.adjoint()};
      if (shaped) {
        if (options_.with_dephasing) {
          rho = dephase(rho, sys_, options_.pulse_duration_s / 2.0);
        }
        elapsed_ += options_.pulse_duration_s;
      }
      return;
    }
  }
}

void SequenceSimulator::run(DensityMatrix& rho, const PulseSequence& seq) {
  for (const auto& ev : seq.events) apply(rho, ev);
}

Operator SequenceSimulator::sequence_unitary(const PulseSequence& seq) {
  Operator u = Operator::Identity(sys_.dim(), sys_.dim());
  for (const auto& ev : seq.events) u = event_unitary(ev) * u;
  return u;
}

// --- gate builders ----------------------------------------------------------

PulseSequence cnot_sequence(const SpinSystem& sys, int control, int target) {
  if (control == target) throw ParseError("CNOT needs two distinct spins");
  if (control < 0 || control >= sys.size() || target < 0 ||
      target >= sys.size()) {
    throw ParseError("unknown spin index");
  }
  const double j = sys.j_hz(control, target);
  if (j == 0.0) throw ParseError("CNOT requires a nonzero coupling");
  const double tau = 1.0 / (2.0 * std::abs(j));

  std::vector<int> spectators;
  for (int k = 0; k < sys.size(); ++k) {
    if (k != control && k != target && sys.j_hz(target, k) != 0.0) {
      spectators.push_back(k);
    }
  }

  PulseSequence seq;
  seq.name = "cnot_" + sys.labels[control] + sys.labels[target];
  seq.add(SequenceEvent::pulse({target}, Axis::Y, 90.0));
  if (spectators.empty()) {
    seq.add(SequenceEvent::delay(tau));
    seq.add(SequenceEvent::pulse({target}, Axis::X, j > 0.0 ? 90.0 : -90.0));
  } else {
    // Couplings from the target to spectators are refocused by flipping the
    // spectators mid-delay and flipping them back at the end.
    seq.add(SequenceEvent::delay(tau / 2.0));
    seq.add(SequenceEvent::pulse(spectators, Axis::X, 180.0));
    seq.add(SequenceEvent::delay(tau / 2.0));
    seq.add(SequenceEvent::pulse(
        {PulseGroup{spectators, Axis::X, -180.0},
         PulseGroup{{target}, Axis::X, j > 0.0 ? 90.0 : -90.0}}));
  }
  return seq;
}

std::pair<double, double> labeling_delays(const SpinSystem& sys) {
  // Spin 0 is the label. The spin with the stronger coupling to the label is
  // refocused mid-sequence, so its conditional phase builds during
  // tau1 - tau2 while the other one uses the full tau1 + tau2.
  const double j01 = sys.j_hz(0, 1);
  const double j02 = sys.j_hz(0, 2);
  const int p = std::abs(j01) >= std::abs(j02) ? 1 : 2;
  const int q = p == 1 ? 2 : 1;
  const double jp = sys.j_hz(0, p);
  const double jq = sys.j_hz(0, q);
  const double sum = 1.0 / (2.0 * std::abs(jq));
  // Conditional phases: pi*jp*(tau1 - tau2) = -pi/2 * sign(jq),
  // pi*jq*(tau1 + tau2) = +pi/2 * sign(jq).
  const double diff = -(jq > 0 ? 1.0 : -1.0) / (2.0 * jp);
  return {(sum + diff) / 2.0, (sum - diff) / 2.0};
}

PulseSequence labeling_sequence(const SpinSystem& sys) {
  if (sys.size() != 3) throw ParseError("labeling is defined for 3 spins");
  if (sys.j_hz(0, 1) == 0.0 || sys.j_hz(0, 2) == 0.0) {
    throw ParseError("labeling requires couplings from both computation spins to the label");
  }
  const int p = std::abs(sys.j_hz(0, 1)) >= std::abs(sys.j_hz(0, 2)) ? 1 : 2;
  const auto [tau1, tau2] = labeling_delays(sys);
  if (tau1 < 0.0 || tau2 < 0.0) {
    throw NumericError("labeling delays came out negative; couplings too asymmetric");
  }

  // Simultaneous CNOTs of both computation spins onto the label: a -y90 /
  // y90 sandwich on the label turns the accumulated conditional phases
  // into a conditional flip — spin 0 flips exactly when spins 1 and 2
  // disagree, swapping populations |001><->|101| and |010><->|110|.
  PulseSequence seq;
  seq.name = "label";
  seq.add(SequenceEvent::pulse({0}, Axis::Y, -90.0));
  seq.add(SequenceEvent::delay(tau1));
  seq.add(SequenceEvent::pulse({p}, Axis::X, 180.0));
  seq.add(SequenceEvent::delay(tau2));
  seq.add(SequenceEvent::pulse({PulseGroup{{0}, Axis::Y, 90.0},
                                PulseGroup{{p}, Axis::X, -180.0}}));
  return seq;
}

std::vector<PulseSequence> composite_z_variants(const SpinSystem& sys,
                                                int spin, double angle_deg) {
  if (spin < 0 || spin >= sys.size()) throw ParseError("unknown spin index");
  const double h = 90.0;
  const double t = angle_deg;
  // Each is exp(-i angle I_z) exactly: a theta rotation conjugated into z by
  // 90-degree pulses. Patterns: y/x/-y, -y/-x/y, x/-y/-x, -x/y/x.
  const std::vector<std::array<std::pair<Axis, double>, 3>> patterns = {
      {{{Axis::Y, h}, {Axis::X, t}, {Axis::Y, -h}}},
      {{{Axis::Y, -h}, {Axis::X, -t}, {Axis::Y, h}}},
      {{{Axis::X, h}, {Axis::Y, -t}, {Axis::X, -h}}},
      {{{Axis::X, -h}, {Axis::Y, t}, {Axis::X, h}}},
  };
  std::vector<PulseSequence> out;
  for (size_t v = 0; v < patterns.size(); ++v) {
    PulseSequence seq;
    seq.name = "z" + std::to_string(v);
    for (const auto& [axis, angle] : patterns[v]) {
      seq.add(SequenceEvent::pulse({spin}, axis, angle));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

Capacity labeling_capacity(int n) {
  if (n < 2 || n % 2 != 0) {
    throw ParseError("capacity is defined for even n >= 2");
  }
  // k = log2(1 + C(n, n/2)), computed through log-gamma so large n cannot
  // overflow.
  const double log_c =
      std::lgamma(n + 1.0) - 2.0 * std::lgamma(n / 2.0 + 1.0);
  const double log1p_c = log_c + std::log1p(std::exp(-log_c));
  const double k = log1p_c / std::log(2.0);
  return {k, static_cast<long long>(std::floor(k + 1e-12))};
}

}  // namespace spinlab
