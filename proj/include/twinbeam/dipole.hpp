#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "twinbeam/config.hpp"
#include "twinbeam/mode_grid.hpp"

namespace twinbeam {

enum class DipoleVariant { Constant, PlateauCutoff, TableFile };

// Phenomenological model of the effective recombination dipole
// mu_eg(n*omega_pu) and the bound-bound element mu_b. Amplitudes are
// specified in units that make the effective susceptibility dimensionless.
struct DipoleModel {
  DipoleVariant variant = DipoleVariant::Constant;
  std::complex<double> mu0{1.0, 0.0};
  std::complex<double> mu_b{1.0, 0.0};
  double cutoff_decay = 1.0;                 // PlateauCutoff only, > 0
  double intensity_scaling_exponent = 0.0;   // >= 0
  double intensity_ref = 5.0e18;             // W/m^2, s(I_ref) = 1
  std::string table_path;                    // TableFile only
  std::map<int, std::complex<double>> table; // n -> mu_eg, loaded from table_path
};

// Per-channel dipoles evaluated on the active grid.
struct ChannelDipoles {
  std::vector<std::complex<double>> mu_eg;  // one per grid channel
  std::complex<double> mu_b{0.0, 0.0};
};

// Constant: mu0*s(I). PlateauCutoff: plateau up to the HHG cutoff then an
// exponential tail exp(-decay*(n*hw - cutoff)/hw). TableFile: exact table
// lookup. s(I) = (I/I_ref)^(exponent/2). Throws on TableMissingChannel.
std::complex<double> effective_recombination_dipole(const DipoleModel& model, int n,
                                                    double omega_pu, double intensity,
                                                    double cutoff_energy);

std::complex<double> bound_dipole(const DipoleModel& model);

ChannelDipoles channel_dipoles(const DipoleModel& model, const ModeGrid& grid,
                               const PhysicalConfig& cfg, const DerivedQuantities& derived);

// Table file: one '#'-commentable record per line, `mu_b re im` header then
// `n re(mu_eg) im(mu_eg)` rows. Values written with 17 significant digits.
void write_dipole_table(const std::string& path, std::complex<double> mu_b,
                        const std::map<int, std::complex<double>>& table);
void load_dipole_table(DipoleModel& model);

// Rescales mu0 and mu_b together so that max_n |chi_c^eff| equals
// target_peak_chi (relative error < 1e-10). Returns the rescaled model;
// the applied amplitude factor is written to *scale_out when non-null.
DipoleModel calibrate_dipole(const DipoleModel& model, const ModeGrid& grid,
                             const PhysicalConfig& cfg, const DerivedQuantities& derived,
                             double target_peak_chi, double* scale_out = nullptr);

}  // namespace twinbeam
