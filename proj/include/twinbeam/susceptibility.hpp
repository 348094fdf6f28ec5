#pragma once

#include <complex>
#include <vector>

#include "twinbeam/dipole.hpp"
#include "twinbeam/mode_grid.hpp"

namespace twinbeam {

struct SusceptibilityPair {
  std::complex<double> chi_pr{0.0, 0.0};
  std::complex<double> chi_c{0.0, 0.0};
};

struct CouplingCoefficients {
  std::complex<double> kappa_pr{0.0, 0.0};  // 1/m
  std::complex<double> kappa_c{0.0, 0.0};   // 1/m
};

// chi_pr^eff for channel index i:
//   (-i/hbar) * (-rho mu_eg(n w_pu) mu_b) / (w_eg + w_c - n w_pu - i gamma)
std::complex<double> chi_pr_eff(const ModeGrid& grid, const ChannelDipoles& dipoles,
                                double rho, double gamma, double omega_eg, int channel);

// chi_c^eff: same numerator over (w_eg + w_pr - n w_pu - i gamma).
std::complex<double> chi_c_eff(const ModeGrid& grid, const ChannelDipoles& dipoles,
                               double rho, double gamma, double omega_eg, int channel);

// kappa_c = (i k_c / 2) chi_c, kappa_pr = (i k_pr / 2) chi_pr.
CouplingCoefficients kappa(const ModeGrid& grid, const SusceptibilityPair& chi, int channel);

std::vector<SusceptibilityPair> susceptibilities(const ModeGrid& grid,
                                                 const ChannelDipoles& dipoles, double rho,
                                                 double gamma, double omega_eg);

std::vector<CouplingCoefficients> couplings(const ModeGrid& grid,
                                            const std::vector<SusceptibilityPair>& chis);

double peak_abs_chi_c(const ModeGrid& grid, const ChannelDipoles& dipoles, double rho,
                      double gamma, double omega_eg);

}  // namespace twinbeam
