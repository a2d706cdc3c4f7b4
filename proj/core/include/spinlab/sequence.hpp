#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/density_matrix.hpp"
#include "spinlab/pulse.hpp"

namespace spinlab {

/// One rotation applied to a set of spins (all with the same axis and
/// angle). Angles are signed degrees, the unit the pulse-program format
/// uses; a negative angle about y is the usual "y-bar" pulse. Radians
/// appear only where rotations are actually built.
struct PulseGroup {
  std::vector<int> spins;
  Axis axis = Axis::X;
  double angle_deg = 0.0;
};

inline double radians(double degrees) { return degrees * M_PI / 180.0; }

/// Timeline element of a pulse program: simultaneous pulses on disjoint
/// spins, a free-evolution delay, or a zero-duration change of reference
/// frame.
struct SequenceEvent {
  enum class Kind { Pulse, Delay, FrameShift };
  Kind kind = Kind::Delay;
  std::vector<PulseGroup> pulses;  // Kind::Pulse; disjoint spin sets
  double delay_s = 0.0;            // Kind::Delay
  Frame frame;                     // Kind::FrameShift

  static SequenceEvent pulse(std::vector<PulseGroup> groups);
  static SequenceEvent pulse(std::vector<int> spins, Axis axis,
                             double angle_deg);
  static SequenceEvent delay(double seconds);
  static SequenceEvent frame_shift(Frame frame);

  int pulse_count() const;
  void validate(const SpinSystem& sys) const;
};

struct PulseSequence {
  std::string name;
  std::vector<SequenceEvent> events;

  PulseSequence& add(SequenceEvent ev);
  int pulse_count() const;
  /// Sum of delays (ideal pulses are instantaneous).
  double ideal_duration() const;
  /// Sum of delays plus one pulse length per pulse event.
  double duration_with_pulses(double pulse_length_s) const;
  void validate(const SpinSystem& sys) const;
};

/// Systematic pulse imperfections: every flip angle is scaled by
/// (1 + flip_angle_error) and every RF phase shifted by phase_offset_rad.
struct ErrorModel {
  double flip_angle_error = 0.0;
  double phase_offset_rad = 0.0;
  bool use_shaped = false;

  bool is_ideal() const {
    return flip_angle_error == 0.0 && phase_offset_rad == 0.0 && !use_shaped;
  }
  static ErrorModel from_file(const std::string& path);
  static ErrorModel from_string(const std::string& text,
                                const std::string& origin = "<string>");
};

struct SimulationOptions {
  bool shaped_pulses = false;
  double pulse_duration_s = 300e-6;
  Envelope envelope = Envelope::Gaussian;
  double truncation_sigmas = 3.0;
  bool with_dephasing = false;
  ErrorModel errors;
  IntegrationSettings integration;
};

/// Applies sequences to states: ideal pulses are instantaneous embedded
/// rotations, shaped pulses go through the sliced integrator, delays evolve
/// under the current frame Hamiltonian (with optional T2 dephasing). Frame
/// shifts swap the Hamiltonian; subsequent phases are read in the new frame.
/// Shaped-pulse propagators are cached per distinct event.
class SequenceSimulator {
 public:
  SequenceSimulator(const SpinSystem& sys, Frame frame,
                    SimulationOptions options = {});

  void apply(DensityMatrix& rho, const SequenceEvent& event);
  void run(DensityMatrix& rho, const PulseSequence& seq);

  /// Propagator of a single event in the current frame (dephasing ignored).
  Operator event_unitary(const SequenceEvent& event);
  /// Product of event unitaries; exact for ideal pulses, and for shaped
  /// pulses whenever the sequence contains no frame shifts.
  Operator sequence_unitary(const PulseSequence& seq);

  const Frame& frame() const { return frame_; }
  void set_frame(const Frame& frame);
  double elapsed() const { return elapsed_; }

 private:
  Operator shaped_event_unitary(const SequenceEvent& event);

  const SpinSystem& sys_;
  Frame frame_;
  SimulationOptions options_;
  Eigen::VectorXd h_diag_;
  double elapsed_ = 0.0;
  std::map<std::string, Operator> cache_;
};

// --- sequence builders ------------------------------------------------------

/// Controlled-NOT flipping `target` iff `control` is |1>, up to diagonal
/// phases: a y90 on the target, a 1/(2|J|) delay, and an x90 (sign chosen by
/// the coupling's sign). Couplings of the target to spectator spins are
/// refocused with a 180/-180 pulse pair. Throws ParseError if the two spins
/// are uncoupled.
PulseSequence cnot_sequence(const SpinSystem& sys, int control, int target);

/// Logical labeling for a 3-spin system: simultaneous CNOTs of spins 1 and 2
/// onto spin 0, realized as a -y90 on spin 0, delays tau1/tau2 with a 180
/// refocusing pulse on spin 1, and a closing y90. On any diagonal state this
/// permutes populations by exactly the transpositions |001><->|101| and
/// |010><->|110>, turning the thermal pattern into one whose label-|0> block
/// is effective pure |00>.
PulseSequence labeling_sequence(const SpinSystem& sys);

/// Delays of the labeling sequence (tau1, tau2), exposed for duration tests.
std::pair<double, double> labeling_delays(const SpinSystem& sys);

/// The four composite realizations of a z rotation by `angle_deg` on one
/// spin, each a 90-degree sandwich about a transverse axis: y/x/-y, -y/-x/y,
/// x/-y/-x and -x/y/x patterns. Ideal pulses make all four equal; with
/// miscalibrated pulses they differ, which is what makes the choice matter.
std::vector<PulseSequence> composite_z_variants(const SpinSystem& sys,
                                                int spin, double angle_deg);

/// Subspace capacity of logical labeling on n (even) equally polarized
/// spins: k = log2(1 + C(n, n/2)) effective pure qubits, and its floor.
struct Capacity {
  double k;
  long long k_int;
};
Capacity labeling_capacity(int n);

}  // namespace spinlab
