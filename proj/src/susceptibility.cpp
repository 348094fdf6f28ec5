#include "twinbeam/susceptibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twinbeam/constants.hpp"

namespace twinbeam {

namespace {

using cplx = std::complex<double>;

cplx chi_common(const ModeGrid& grid, const ChannelDipoles& dipoles, double rho,
                double gamma, double omega_eg, int channel, bool probe_branch) {
  const auto& ch = grid.channels.at(static_cast<size_t>(channel));
  const cplx minus_i_over_hbar{0.0, -1.0 / constants::hbar};
  const cplx numerator = -rho * dipoles.mu_eg.at(static_cast<size_t>(channel)) * dipoles.mu_b;
  const double omega_other = probe_branch ? ch.omega : grid.omega_pr;
  const cplx denominator{omega_eg + omega_other - ch.n * grid.omega_pu, -gamma};
  return minus_i_over_hbar * numerator / denominator;
}

}  // namespace

cplx chi_pr_eff(const ModeGrid& grid, const ChannelDipoles& dipoles, double rho,
                double gamma, double omega_eg, int channel) {
  return chi_common(grid, dipoles, rho, gamma, omega_eg, channel, true);
}

cplx chi_c_eff(const ModeGrid& grid, const ChannelDipoles& dipoles, double rho,
               double gamma, double omega_eg, int channel) {
  return chi_common(grid, dipoles, rho, gamma, omega_eg, channel, false);
}

CouplingCoefficients kappa(const ModeGrid& grid, const SusceptibilityPair& chi, int channel) {
  const cplx half_i{0.0, 0.5};
  CouplingCoefficients k;
  k.kappa_pr = half_i * grid.k_pr * chi.chi_pr;
  k.kappa_c = half_i * grid.channels.at(static_cast<size_t>(channel)).k * chi.chi_c;
  return k;
}

std::vector<SusceptibilityPair> susceptibilities(const ModeGrid& grid,
                                                 const ChannelDipoles& dipoles, double rho,
                                                 double gamma, double omega_eg) {
  std::vector<SusceptibilityPair> out(grid.channels.size());
  for (size_t i = 0; i < grid.channels.size(); ++i) {
    const int ch = static_cast<int>(i);
    out[i].chi_pr = chi_pr_eff(grid, dipoles, rho, gamma, omega_eg, ch);
    out[i].chi_c = chi_c_eff(grid, dipoles, rho, gamma, omega_eg, ch);
  }
  return out;
}

std::vector<CouplingCoefficients> couplings(const ModeGrid& grid,
                                            const std::vector<SusceptibilityPair>& chis) {
  std::vector<CouplingCoefficients> out(chis.size());
  for (size_t i = 0; i < chis.size(); ++i) {
    out[i] = kappa(grid, chis[i], static_cast<int>(i));
  }
  return out;
}

double peak_abs_chi_c(const ModeGrid& grid, const ChannelDipoles& dipoles, double rho,
                      double gamma, double omega_eg) {
  double peak = 0.0;
  for (size_t i = 0; i < grid.channels.size(); ++i) {
    peak = std::max(peak, std::abs(chi_c_eff(grid, dipoles, rho, gamma, omega_eg,
                                             static_cast<int>(i))));
  }
  return peak;
}

DipoleModel calibrate_dipole(const DipoleModel& model, const ModeGrid& grid,
                             const PhysicalConfig& cfg, const DerivedQuantities& derived,
                             double target_peak_chi, double* scale_out) {
  if (!(target_peak_chi > 0.0)) {
    throw std::invalid_argument("calibrate_dipole: target_peak_chi must be positive");
  }
  const auto dip = channel_dipoles(model, grid, cfg, derived);
  const double omega_eg = transition_frequency(cfg);
  const double current = peak_abs_chi_c(grid, dip, derived.gas_density,
                                        cfg.dephasing_gamma, omega_eg);
  if (!(current > 0.0)) {
    throw std::runtime_error("calibrate_dipole: current peak |chi_c| is zero");
  }
  // chi scales as mu_eg*mu_b, so split the ratio evenly between the two.
  const double factor = std::sqrt(target_peak_chi / current);
  DipoleModel scaled = model;
  scaled.mu0 *= factor;
  scaled.mu_b *= factor;
  for (auto& [n, mu] : scaled.table) mu *= factor;
  if (scale_out) *scale_out = factor;
  return scaled;
}

}  // namespace twinbeam
