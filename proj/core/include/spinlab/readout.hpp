#pragma once

#include <vector>

#include "spinlab/density_matrix.hpp"
#include "spinlab/sequence.hpp"

namespace spinlab {

/// Free-induction decay: one complex channel per observed spin, each
/// recorded in that spin's own rotating frame.
struct Fid {
  std::vector<int> spins;
  Eigen::MatrixXcd samples;  // channel-major: samples(ch, k)
  double dt_s = 0.0;
  Frame frame;

  int channels() const { return static_cast<int>(samples.rows()); }
  int length() const { return static_cast<int>(samples.cols()); }
  int channel_of(int spin) const;  // -1 if not acquired
};

struct AcquisitionSettings {
  double duration_s = 4.0;
  double dt_s = 1e-3;
  /// Apply the y90 read-out pulse that tips spins into the transverse
  /// plane; receivers are phased so a spin in |0> gives a positive
  /// absorptive line. Callers that already rotated the state turn this off.
  bool readout_pulse = true;
};

/// Simulates detection of the chosen spins: s_ch(t) = Tr(rho(t) I-_ch) with
/// rho evolved under the frame Hamiltonian and T2 dephasing. Throws
/// NumericError if any analytic line exceeds the Nyquist frequency 1/(2 dt).
Fid simulate_fid(const DensityMatrix& rho, const SpinSystem& sys,
                 const Frame& frame, const std::vector<int>& spins,
                 const AcquisitionSettings& acq = {});

struct Spectrum {
  std::vector<double> freq_hz;   // strictly increasing, frame-relative
  std::vector<Complex> amp;

  int size() const { return static_cast<int>(freq_hz.size()); }
  double bin_width() const { return freq_hz.size() > 1 ? freq_hz[1] - freq_hz[0] : 0.0; }
  int nearest_bin(double f_hz) const;
  /// Trapezoid-free plain sum of Re(amp) * bin_width over a window.
  double integrate_real(double center_hz, double half_width_hz) const;
  Complex peak_in(double center_hz, double half_width_hz, double* at_hz = nullptr) const;
};

/// Discrete Fourier transform of one FID channel, normalization 1/N, with
/// zero-filling by the given factor (rounded up to a power of two for the
/// FFT). A unit tone exp(i 2 pi f t) lands in the bin nearest +f.
Spectrum spectrum(const Fid& fid, int channel, int zero_fill_factor = 4);

/// One resolved single-quantum transition of an observed spin: the pair of
/// basis states it connects and its frame-relative frequency
///   f = -delta_i - sum_j (J_ij / 2) sign_j.
struct TransitionLine {
  int spin = 0;
  int upper = 0;  // basis state with the observed spin in |1>
  int lower = 0;  // same state with the observed spin in |0>
  double freq_hz = 0.0;
};

/// The 2^(n-1) transition lines of one spin's channel, sorted by frequency.
std::vector<TransitionLine> channel_lines(const SpinSystem& sys,
                                          const Frame& frame, int spin);

/// Complex amplitude of each listed line, recovered from the time-domain
/// signal by least squares against the known frequencies and decay rate.
/// Exact (to rounding) for noiseless simulated FIDs.
std::vector<Complex> fit_line_amplitudes(const Fid& fid, int channel,
                                         const std::vector<TransitionLine>& lines,
                                         const SpinSystem& sys);

struct PopulationSettings {
  double polarization = 0.01;  // thermal polarization the preparation starts from
  AcquisitionSettings acq;
  int zero_fill_factor = 4;
  double window_hz = 5.0;      // integration half-window per line
};

/// Partial state tomography of populations: read-out pulse + spectrum per
/// spin, one line integral per resolved transition (a population difference
/// across that transition), then a least-squares solve with the mean pinned
/// to zero. Returns mean-subtracted populations. Line integrals are scaled
/// against a reference acquisition of the ground state, so values are
/// absolute. Throws NumericError when lines overlap within the integration
/// window (degenerate system).
Eigen::VectorXd measure_populations(const DensityMatrix& rho,
                                    const SpinSystem& sys, const Frame& frame,
                                    const PopulationSettings& settings = {});

/// Convenience wrapper: thermal state, preparation sequence (ideal pulses,
/// resonant frame), then the measurement above.
Eigen::VectorXd measure_populations(const PulseSequence& preparation,
                                    const SpinSystem& sys,
                                    const PopulationSettings& settings = {});

}  // namespace spinlab
