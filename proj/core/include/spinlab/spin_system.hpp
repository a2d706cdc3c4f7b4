#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinlab {

/// A weakly coupled system of n spin-1/2 nuclei in a strong static field.
///
/// Larmor frequencies are stored as offsets from a common carrier, in Hz;
/// only frequency differences between spins are ever needed, so the carrier
/// itself is arbitrary (convention: first spin at 0 Hz). Scalar couplings
/// J[i][j] are in Hz, transverse relaxation constants T2 in seconds.
///
/// Basis convention used throughout: computational basis |b0 b1 ... b(n-1)>
/// with spin 0 the most significant bit, 0 = ground state. State index
/// s = b0*2^(n-1) + ... + b(n-1).
struct SpinSystem {
  std::vector<std::string> labels;
  std::vector<double> offset_hz;
  Eigen::MatrixXd j_hz;
  std::vector<double> t2_s;

  int size() const { return static_cast<int>(labels.size()); }
  int dim() const { return 1 << size(); }

  /// Index of a spin by label, -1 if unknown.
  int index_of(const std::string& label) const;
  /// Index of a spin by label; throws ParseError if unknown.
  int require_spin(const std::string& label) const;

  /// Throws ParseError if an invariant is broken (J not symmetric, T2 <= 0,
  /// duplicate labels, size mismatches).
  void validate() const;

  /// Loads from a config file with keys: labels, offsets_hz, J_hz, T2_s.
  static SpinSystem from_file(const std::string& path);
  static SpinSystem from_string(const std::string& text,
                                const std::string& origin = "<string>");
  std::string to_config_string() const;

  /// The three-fluorine system of bromotrifluoroethylene, the molecule the
  /// shipped example config describes.
  static SpinSystem bromotrifluoroethylene();
};

/// Bit of spin `spin` in basis state `state` (spin 0 = most significant).
inline int spin_bit(int state, int spin, int n) {
  return (state >> (n - 1 - spin)) & 1;
}

/// +1 for a spin in |0>, -1 for |1> (twice the Iz eigenvalue).
inline int spin_sign(int state, int spin, int n) {
  return spin_bit(state, spin, n) == 0 ? +1 : -1;
}

/// State index with the given spin's bit forced to `value`.
inline int with_spin_bit(int state, int spin, int value, int n) {
  const int mask = 1 << (n - 1 - spin);
  return value ? (state | mask) : (state & ~mask);
}

}  // namespace spinlab
