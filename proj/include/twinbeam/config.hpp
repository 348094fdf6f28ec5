#pragma once

#include <string>
#include <vector>

namespace twinbeam {

// Experiment parameters, SI units. eV/nm/mm are accepted at the
// configuration-file boundary and converted once on load.
struct PhysicalConfig {
  double pump_wavelength = 0.0;       // m
  double pump_intensity = 0.0;        // W/m^2
  double pressure = 0.0;              // Pa
  double temperature = 0.0;           // K
  double cell_length = 0.0;           // m
  double dephasing_gamma = 0.0;       // 1/s
  double ground_energy = 0.0;         // J, negative for bound
  double excited_energy = 0.0;        // J, negative for bound, > ground
  double ionization_potential = 0.0;  // J, = -ground_energy
  int probe_order = 0;                // q
  std::vector<int> channel_orders;    // admissible n
};

struct ConfigError {
  std::string code;     // NonPositiveParameter, BelowThresholdChannel, ...
  std::string message;
};

// Returns the complete list of invariant violations (empty when valid).
std::vector<ConfigError> validate_config(const PhysicalConfig& cfg);

// Throws std::invalid_argument listing every violation.
void require_valid(const PhysicalConfig& cfg);

// Ideal-gas closure rho = P / (k_B T).
double gas_density(double pressure, double temperature);

// U_p = e^2 E0^2 / (4 m_e w^2) with E0 = sqrt(2 I / (eps0 c)).
double ponderomotive_energy(double intensity, double wavelength);

// Peak field amplitude E0 = sqrt(2 I / (eps0 c)).
double field_amplitude(double intensity);

double pump_angular_frequency(double wavelength);

// (E_e - E_g) / hbar, the bound-bound transition frequency.
double transition_frequency(const PhysicalConfig& cfg);

struct DerivedQuantities {
  double gas_density = 0.0;       // 1/m^3
  double ponderomotive = 0.0;     // J
  double cutoff_energy = 0.0;     // J, Ip + 3.17 Up
  double field_amplitude = 0.0;   // V/m
};

DerivedQuantities derive_quantities(const PhysicalConfig& cfg);

}  // namespace twinbeam
