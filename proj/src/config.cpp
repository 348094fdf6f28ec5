#include "twinbeam/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "twinbeam/constants.hpp"

namespace twinbeam {

namespace {

void check_positive(std::vector<ConfigError>& errs, double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    errs.push_back({"NonPositiveParameter", std::string(name) + " must be strictly positive"});
  }
}

}  // namespace

std::vector<ConfigError> validate_config(const PhysicalConfig& cfg) {
  std::vector<ConfigError> errs;
  check_positive(errs, cfg.pump_wavelength, "pump_wavelength");
  check_positive(errs, cfg.pump_intensity, "pump_intensity");
  check_positive(errs, cfg.pressure, "pressure");
  check_positive(errs, cfg.temperature, "temperature");
  check_positive(errs, cfg.cell_length, "cell_length");
  check_positive(errs, cfg.dephasing_gamma, "dephasing_gamma");
  check_positive(errs, cfg.ionization_potential, "ionization_potential");
  if (cfg.probe_order <= 0) {
    errs.push_back({"NonPositiveParameter", "probe_order must be a positive integer"});
  }
  if (!(cfg.excited_energy > cfg.ground_energy)) {
    errs.push_back({"NonPositiveParameter", "excited_energy must exceed ground_energy"});
  }
  if (cfg.ground_energy != 0.0) {
    const double rel = std::abs(cfg.ionization_potential + cfg.ground_energy) /
                       std::abs(cfg.ground_energy);
    if (rel > 1e-12) {
      errs.push_back({"NonPositiveParameter",
                      "ionization_potential must equal -ground_energy (rel. tol. 1e-12)"});
    }
  }
  if (cfg.pump_wavelength > 0.0) {
    const double omega_pu = pump_angular_frequency(cfg.pump_wavelength);
    const double photon = constants::hbar * omega_pu;
    for (int n : cfg.channel_orders) {
      if (n <= 0) {
        errs.push_back({"NonPositiveParameter",
                        "channel order n=" + std::to_string(n) + " must be positive"});
        continue;
      }
      if (!(n * photon > cfg.ionization_potential)) {
        errs.push_back({"BelowThresholdChannel",
                        "channel n=" + std::to_string(n) +
                            ": n*hbar*omega_pu does not exceed the ionization potential"});
      }
      if (n <= cfg.probe_order) {
        errs.push_back({"NegativeConjugateFrequency",
                        "channel n=" + std::to_string(n) +
                            ": conjugate frequency (n - q)*omega_pu is not positive"});
      }
    }
  }
  return errs;
}

void require_valid(const PhysicalConfig& cfg) {
  auto errs = validate_config(cfg);
  if (errs.empty()) return;
  std::ostringstream oss;
  oss << "invalid configuration:";
  for (const auto& e : errs) oss << "\n  [" << e.code << "] " << e.message;
  throw std::invalid_argument(oss.str());
}

double gas_density(double pressure, double temperature) {
  if (!(pressure > 0.0) || !(temperature > 0.0)) {
    throw std::invalid_argument("gas_density: pressure and temperature must be positive");
  }
  return pressure / (constants::k_boltzmann * temperature);
}

double field_amplitude(double intensity) {
  return std::sqrt(2.0 * intensity / (constants::epsilon0 * constants::c_light));
}

double ponderomotive_energy(double intensity, double wavelength) {
  using namespace constants;
  const double e0 = field_amplitude(intensity);
  const double omega = pump_angular_frequency(wavelength);
  return elementary_charge * elementary_charge * e0 * e0 /
         (4.0 * electron_mass * omega * omega);
}

double pump_angular_frequency(double wavelength) {
  return 2.0 * constants::pi * constants::c_light / wavelength;
}

double transition_frequency(const PhysicalConfig& cfg) {
  return (cfg.excited_energy - cfg.ground_energy) / constants::hbar;
}

DerivedQuantities derive_quantities(const PhysicalConfig& cfg) {
  DerivedQuantities d;
  d.gas_density = gas_density(cfg.pressure, cfg.temperature);
  d.ponderomotive = ponderomotive_energy(cfg.pump_intensity, cfg.pump_wavelength);
  d.cutoff_energy = cfg.ionization_potential + 3.17 * d.ponderomotive;
  d.field_amplitude = field_amplitude(cfg.pump_intensity);
  return d;
}

}  // namespace twinbeam
