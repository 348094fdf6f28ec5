#include "twinbeam/mode_grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "twinbeam/constants.hpp"

namespace twinbeam {

ModeGrid build_mode_grid(const PhysicalConfig& cfg) {
  ModeGrid grid;
  grid.omega_pu = pump_angular_frequency(cfg.pump_wavelength);
  grid.probe_order = cfg.probe_order;
  grid.omega_pr = cfg.probe_order * grid.omega_pu;
  grid.k_pr = grid.omega_pr / constants::c_light;

  const double photon = constants::hbar * grid.omega_pu;
  std::vector<int> orders = cfg.channel_orders;
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());

  for (int n : orders) {
    if (n <= 0) continue;
    if (!(n * photon > cfg.ionization_potential)) continue;  // above-threshold only
    const double omega_c = n * grid.omega_pu - grid.omega_pr;
    if (!(omega_c > 0.0)) continue;
    Channel ch;
    ch.n = n;
    ch.omega = omega_c;
    ch.k = omega_c / constants::c_light;
    grid.channels.push_back(ch);
  }
  if (grid.channels.empty()) {
    throw std::runtime_error("EmptyGrid: no channel order passes the admissibility filters");
  }

  // Energy conservation must hold to 1 ulp after construction.
  for (const auto& ch : grid.channels) {
    const double lhs = ch.omega + grid.omega_pr;
    const double rhs = ch.n * grid.omega_pu;
    const double ulp = std::abs(std::nextafter(rhs, INFINITY) - rhs);
    if (std::abs(lhs - rhs) > ulp) {
      throw std::logic_error("mode grid violates energy conservation beyond 1 ulp");
    }
  }
  return grid;
}

}  // namespace twinbeam
