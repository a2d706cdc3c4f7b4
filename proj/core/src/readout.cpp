#include "spinlab/readout.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "spinlab/errors.hpp"

namespace spinlab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
const Complex kI{0.0, 1.0};

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}
}  // namespace

int Fid::channel_of(int spin) const {
  for (size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] == spin) return static_cast<int>(i);
  }
  return -1;
}

std::vector<TransitionLine> channel_lines(const SpinSystem& sys,
                                          const Frame& frame, int spin) {
  const int n = sys.size();
  if (spin < 0 || spin >= n) throw ParseError("unknown spin index");
  if (frame.size() != n) throw ParseError("frame has wrong number of offsets");
  std::vector<TransitionLine> lines;
  const int dim = sys.dim();
  for (int s = 0; s < dim; ++s) {
    if (spin_bit(s, spin, n) != 0) continue;
    TransitionLine line;
    line.spin = spin;
    line.lower = s;
    line.upper = with_spin_bit(s, spin, 1, n);
    double f = -frame.delta_hz[spin];
    for (int j = 0; j < n; ++j) {
      if (j != spin) f -= 0.5 * sys.j_hz(spin, j) * spin_sign(s, j, n);
    }
    line.freq_hz = f;
    lines.push_back(line);
  }
  std::sort(lines.begin(), lines.end(),
            [](const TransitionLine& a, const TransitionLine& b) {
              return a.freq_hz < b.freq_hz;
            });
  return lines;
}

Fid simulate_fid(const DensityMatrix& rho, const SpinSystem& sys,
                 const Frame& frame, const std::vector<int>& spins,
                 const AcquisitionSettings& acq) {
  const int n = sys.size();
  if (spins.empty()) throw ParseError("no spins to acquire");
  if (!(acq.dt_s > 0.0) || acq.duration_s < 2.0 * acq.dt_s) {
    throw ParseError("acquisition needs dt > 0 and duration >= 2 dt");
  }
  const double nyquist = 1.0 / (2.0 * acq.dt_s);
  for (int spin : spins) {
    for (const auto& line : channel_lines(sys, frame, spin)) {
      if (std::abs(line.freq_hz) >= nyquist) {
        throw NumericError("line at " + std::to_string(line.freq_hz) +
                           " Hz exceeds the Nyquist frequency");
      }
    }
  }

  DensityMatrix state = rho;
  if (acq.readout_pulse) {
    for (int spin : spins) {
      const Operator u = rotation_unitary(sys, spin, Axis::Y, M_PI / 2.0);
      state = DensityMatrix{u * state.rho * u.adjoint()};
    }
  }

  const int dim = sys.dim();
  const Eigen::VectorXd h = hamiltonian_diagonal(sys, frame);
  // Combined per-step propagation: coherence (r,c) picks up the transition
  // phase and decays at the summed 1/T2 of the spins whose bits differ.
  Eigen::MatrixXcd step(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      double rate = 0.0;
      for (int i = 0; i < n; ++i) {
        if (spin_bit(r, i, n) != spin_bit(c, i, n)) rate += 1.0 / sys.t2_s[i];
      }
      step(r, c) = std::exp(Complex{-rate * acq.dt_s, 0.0} -
                            kI * (h(r) - h(c)) * acq.dt_s);
    }
  }

  const int len = static_cast<int>(std::floor(acq.duration_s / acq.dt_s));
  Fid fid;
  fid.spins = spins;
  fid.dt_s = acq.dt_s;
  fid.frame = frame;
  fid.samples.resize(static_cast<int>(spins.size()), len);

  Eigen::MatrixXcd m = state.rho;
  for (int k = 0; k < len; ++k) {
    for (size_t ch = 0; ch < spins.size(); ++ch) {
      // Tr(rho I-) = sum over pairs differing only in the observed bit.
      const int mask = 1 << (n - 1 - spins[ch]);
      Complex s = 0.0;
      for (int r = 0; r < dim; ++r) {
        if ((r & mask) == 0) s += m(r, r | mask);
      }
      fid.samples(static_cast<int>(ch), k) = s;
    }
    m = m.cwiseProduct(step);
  }
  return fid;
}

int Spectrum::nearest_bin(double f_hz) const {
  const auto it = std::lower_bound(freq_hz.begin(), freq_hz.end(), f_hz);
  if (it == freq_hz.begin()) return 0;
  if (it == freq_hz.end()) return size() - 1;
  const int hi = static_cast<int>(it - freq_hz.begin());
  return (f_hz - freq_hz[hi - 1] <= freq_hz[hi] - f_hz) ? hi - 1 : hi;
}

double Spectrum::integrate_real(double center_hz, double half_width_hz) const {
  const double bw = bin_width();
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (std::abs(freq_hz[i] - center_hz) <= half_width_hz) sum += amp[i].real();
  }
  return sum * bw;
}

Complex Spectrum::peak_in(double center_hz, double half_width_hz,
                          double* at_hz) const {
  Complex best = 0.0;
  double best_abs = -1.0;
  for (int i = 0; i < size(); ++i) {
    if (std::abs(freq_hz[i] - center_hz) <= half_width_hz &&
        std::abs(amp[i]) > best_abs) {
      best_abs = std::abs(amp[i]);
      best = amp[i];
      if (at_hz) *at_hz = freq_hz[i];
    }
  }
  return best;
}

Spectrum spectrum(const Fid& fid, int channel, int zero_fill_factor) {
  if (channel < 0 || channel >= fid.channels()) {
    throw ParseError("no such FID channel");
  }
  const int len = fid.length();
  const int nfft = next_pow2(std::max(1, zero_fill_factor) * len);
  std::vector<Complex> in(nfft, Complex{0.0, 0.0});
  for (int k = 0; k < len; ++k) in[k] = fid.samples(channel, k);

  Eigen::FFT<double> fft;
  std::vector<Complex> out(nfft);
  fft.fwd(out, in);

  // 1/N normalization; axis rearranged to ascending frequency so a tone
  // exp(i 2 pi f t) lands in the bin nearest +f.
  Spectrum spec;
  spec.freq_hz.resize(nfft);
  spec.amp.resize(nfft);
  const double df = 1.0 / (nfft * fid.dt_s);
  for (int i = 0; i < nfft; ++i) {
    const int m = i - nfft / 2;                      // negative..positive
    const int src = (m + nfft) % nfft;
    spec.freq_hz[i] = m * df;
    spec.amp[i] = out[src] / static_cast<double>(nfft);
  }
  return spec;
}

std::vector<Complex> fit_line_amplitudes(const Fid& fid, int channel,
                                         const std::vector<TransitionLine>& lines,
                                         const SpinSystem& sys) {
  if (channel < 0 || channel >= fid.channels()) {
    throw ParseError("no such FID channel");
  }
  const int len = fid.length();
  const int nl = static_cast<int>(lines.size());
  const double t2 = sys.t2_s[fid.spins[channel]];
  Eigen::MatrixXcd model(len, nl);
  for (int k = 0; k < len; ++k) {
    const double t = k * fid.dt_s;
    for (int l = 0; l < nl; ++l) {
      model(k, l) = std::exp(Complex{-t / t2, 0.0} +
                             kI * kTwoPi * lines[l].freq_hz * t);
    }
  }
  const Eigen::VectorXcd sig = fid.samples.row(channel).transpose();
  const Eigen::VectorXcd sol = model.colPivHouseholderQr().solve(sig);
  return {sol.data(), sol.data() + nl};
}

namespace {

// Per-channel reference on the ground state |00...0>: fixes the receiver
// phase and the line-integral scale so measured amplitudes become absolute
// population differences.
Complex channel_calibration(const SpinSystem& sys, const Frame& frame,
                            int spin, const PopulationSettings& st) {
  const DensityMatrix ground = DensityMatrix::basis_state(sys.size(), 0);
  const Fid fid = simulate_fid(ground, sys, frame, {spin}, st.acq);
  const Spectrum spec = spectrum(fid, 0, st.zero_fill_factor);
  double f_ref = 0.0;
  for (const auto& line : channel_lines(sys, frame, spin)) {
    if (line.lower == 0) f_ref = line.freq_hz;  // all spectators in |0>
  }
  const double bw = spec.bin_width();
  Complex integral = 0.0;
  for (int i = 0; i < spec.size(); ++i) {
    if (std::abs(spec.freq_hz[i] - f_ref) <= st.window_hz) {
      integral += spec.amp[i] * bw;
    }
  }
  if (std::abs(integral) < 1e-300) {
    throw NumericError("population calibration produced no signal");
  }
  return integral;
}

}  // namespace

Eigen::VectorXd measure_populations(const DensityMatrix& rho,
                                    const SpinSystem& sys, const Frame& frame,
                                    const PopulationSettings& st) {
  const int n = sys.size();
  const int dim = sys.dim();

  // Each resolved line integrates to (p_lower - p_upper); the line set is
  // the edge set of the n-cube, rank dim-1, so pinning the mean recovers
  // all relative populations.
  std::vector<std::pair<TransitionLine, double>> diffs;
  for (int spin = 0; spin < n; ++spin) {
    const auto lines = channel_lines(sys, frame, spin);
    for (size_t i = 0; i + 1 < lines.size(); ++i) {
      if (lines[i + 1].freq_hz - lines[i].freq_hz < 2.0 * st.window_hz) {
        throw NumericError("degenerate line overlap in channel " +
                           sys.labels[spin]);
      }
    }
    const Complex cal = channel_calibration(sys, frame, spin, st);
    const Fid fid = simulate_fid(rho, sys, frame, {spin}, st.acq);
    const Spectrum spec = spectrum(fid, 0, st.zero_fill_factor);
    const double bw = spec.bin_width();
    for (const auto& line : lines) {
      Complex integral = 0.0;
      for (int i = 0; i < spec.size(); ++i) {
        if (std::abs(spec.freq_hz[i] - line.freq_hz) <= st.window_hz) {
          integral += spec.amp[i] * bw;
        }
      }
      diffs.push_back({line, (integral / cal).real()});
    }
  }

  const int rows = static_cast<int>(diffs.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows + 1, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows + 1);
  for (int r = 0; r < rows; ++r) {
    a(r, diffs[r].first.lower) = 1.0;
    a(r, diffs[r].first.upper) = -1.0;
    b(r) = diffs[r].second;
  }
  a.row(rows).setOnes();  // mean-subtracted representation

  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(svd.singularValues().size() - 1) < 1e-10) {
    throw NumericError("singular population system");
  }
  return svd.solve(b);
}

Eigen::VectorXd measure_populations(const PulseSequence& preparation,
                                    const SpinSystem& sys,
                                    const PopulationSettings& st) {
  DensityMatrix rho = thermal_state(sys, st.polarization);
  SequenceSimulator sim(sys, Frame::resonant(sys), SimulationOptions{});
  sim.run(rho, preparation);
  return measure_populations(rho, sys, sim.frame(), st);
}

}  // namespace spinlab
