#pragma once

#include <vector>

#include "twinbeam/config.hpp"

namespace twinbeam {

// One conjugate channel: omega_c = n*omega_pu - omega_pr, k = omega/c.
struct Channel {
  int n = 0;
  double omega = 0.0;  // rad/s
  double k = 0.0;      // rad/m, vacuum dispersion
};

// The probe mode plus the conjugate channels admitted by energy
// conservation and the above-threshold condition n*hbar*omega_pu > Ip.
struct ModeGrid {
  double omega_pu = 0.0;
  double omega_pr = 0.0;
  double k_pr = 0.0;
  int probe_order = 0;
  std::vector<Channel> channels;  // sorted ascending in n, unique

  int mode_count() const { return static_cast<int>(channels.size()) + 1; }
  // Mode 0 is the probe; modes 1..N are the conjugate channels.
  double omega_of_mode(int m) const {
    return m == 0 ? omega_pr : channels[static_cast<size_t>(m - 1)].omega;
  }
};

// Throws std::runtime_error("EmptyGrid...") when no channel passes the filters.
ModeGrid build_mode_grid(const PhysicalConfig& cfg);

}  // namespace twinbeam
