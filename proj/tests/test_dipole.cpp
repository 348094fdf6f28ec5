#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>

#include "twinbeam/config.hpp"
#include "twinbeam/constants.hpp"
#include "twinbeam/dipole.hpp"
#include "twinbeam/mode_grid.hpp"
#include "twinbeam/susceptibility.hpp"

using namespace twinbeam;
using cplx = std::complex<double>;

namespace {

PhysicalConfig reference_config() {
  PhysicalConfig cfg;
  cfg.pump_wavelength = nm_to_m(1240.0);
  cfg.pump_intensity = 5e18;
  cfg.pressure = 0.5e5;
  cfg.temperature = 300.0;
  cfg.cell_length = mm_to_m(2.0);
  cfg.dephasing_gamma = 1.2e9;
  cfg.ground_energy = ev_to_joule(-12.13);
  cfg.excited_energy = ev_to_joule(-1.13);
  cfg.ionization_potential = ev_to_joule(12.13);
  cfg.probe_order = 3;
  cfg.channel_orders = {14, 16, 18};
  return cfg;
}

}  // namespace

TEST_CASE("constant dipole scales with intensity as (I/I_ref)^(exp/2)") {
  DipoleModel model;
  model.mu0 = {2.0, 1.0};
  model.intensity_scaling_exponent = 2.0;
  model.intensity_ref = 5e18;
  const double omega_pu = pump_angular_frequency(nm_to_m(1240.0));
  const cplx at_ref = effective_recombination_dipole(model, 14, omega_pu, 5e18, 1.0);
  const cplx at_quarter = effective_recombination_dipole(model, 14, omega_pu, 1.25e18, 1.0);
  CHECK(std::abs(at_ref - model.mu0) == doctest::Approx(0.0));
  CHECK(std::abs(at_quarter - 0.25 * model.mu0) == doctest::Approx(0.0).epsilon(1e-14));

  model.intensity_scaling_exponent = 0.0;
  CHECK(effective_recombination_dipole(model, 14, omega_pu, 1e17, 1.0) == model.mu0);
}

TEST_CASE("plateau-cutoff dipole decays past the cutoff") {
  DipoleModel model;
  model.variant = DipoleVariant::PlateauCutoff;
  model.mu0 = {1.0, 0.0};
  model.cutoff_decay = 0.5;
  const double omega_pu = pump_angular_frequency(nm_to_m(1240.0));
  const double photon = constants::hbar * omega_pu;
  const double cutoff = 15.5 * photon;

  const cplx plateau = effective_recombination_dipole(model, 14, omega_pu, 5e18, cutoff);
  CHECK(plateau == model.mu0);
  const cplx past = effective_recombination_dipole(model, 18, omega_pu, 5e18, cutoff);
  CHECK(std::abs(past) == doctest::Approx(std::exp(-0.5 * (18.0 - 15.5))).epsilon(1e-12));
  CHECK(std::abs(past) < std::abs(plateau));
}

TEST_CASE("dipole table roundtrip and missing channel") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "twinbeam_dipole_table.txt").string();
  std::map<int, cplx> table{{14, {1.0e-26, 2.0e-27}}, {16, {-3.0e-27, 0.0}}};
  write_dipole_table(path, {5.0e-27, -1.0e-27}, table);

  DipoleModel model;
  model.variant = DipoleVariant::TableFile;
  model.table_path = path;
  load_dipole_table(model);
  CHECK(model.mu_b == cplx{5.0e-27, -1.0e-27});
  REQUIRE(model.table.size() == 2);
  CHECK(model.table.at(14) == cplx{1.0e-26, 2.0e-27});

  const double omega_pu = pump_angular_frequency(nm_to_m(1240.0));
  CHECK(effective_recombination_dipole(model, 16, omega_pu, 5e18, 1.0) == cplx{-3.0e-27, 0.0});
  CHECK_THROWS_WITH_AS(effective_recombination_dipole(model, 18, omega_pu, 5e18, 1.0),
                       doctest::Contains("TableMissingChannel"), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("calibration hits the target peak susceptibility") {
  const PhysicalConfig cfg = reference_config();
  const auto derived = derive_quantities(cfg);
  const ModeGrid grid = build_mode_grid(cfg);
  DipoleModel model;
  model.mu0 = {2.5e-25, 0.0};
  model.mu_b = {2.5e-25, 0.0};

  const double target = 1.0e-5;
  double scale = 1.0;
  const DipoleModel cal = calibrate_dipole(model, grid, cfg, derived, target, &scale);

  const auto dip = channel_dipoles(cal, grid, cfg, derived);
  const double peak = peak_abs_chi_c(grid, dip, derived.gas_density, cfg.dephasing_gamma,
                                     transition_frequency(cfg));
  CHECK(peak == doctest::Approx(target).epsilon(1e-10));
  // chi ~ mu0 * mu_b, so both scale by sqrt of the amplitude ratio
  CHECK(std::abs(cal.mu0) / std::abs(model.mu0) == doctest::Approx(scale));
  CHECK(std::abs(cal.mu_b) / std::abs(model.mu_b) == doctest::Approx(scale));

  // doubling the target multiplies each amplitude by sqrt(2)
  const DipoleModel cal2 = calibrate_dipole(model, grid, cfg, derived, 2.0 * target);
  CHECK(std::abs(cal2.mu0) / std::abs(cal.mu0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}
