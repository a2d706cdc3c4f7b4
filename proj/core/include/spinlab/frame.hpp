#pragma once

#include <vector>

#include "spinlab/spin_system.hpp"

namespace spinlab {

/// Per-spin rotating-frame offsets. Spin i's state is expressed in a frame
/// rotating at its own Larmor frequency plus delta_hz[i]; the "resonant"
/// frame is all zeros, in which only the J couplings drive free evolution.
struct Frame {
  std::vector<double> delta_hz;

  static Frame resonant(const SpinSystem& sys);

  int size() const { return static_cast<int>(delta_hz.size()); }
  bool operator==(const Frame& other) const = default;
};

/// The uncoupling frame for a given label spin: delta_i = -J[label][i]/2 for
/// every other spin, zero for the label itself. Within the subspace where
/// the label spin is |0>, free evolution then reduces to the couplings among
/// the remaining spins only.
Frame uncoupling_offsets(const SpinSystem& sys, int label_spin);

}  // namespace spinlab
