#pragma once

// CODATA 2018 values, SI units throughout.
namespace twinbeam::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c_light = 299792458.0;            // m/s
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double planck_h = 6.62607015e-34;        // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double electron_mass = 9.1093837015e-31; // kg
inline constexpr double epsilon0 = 8.8541878128e-12;      // F/m
inline constexpr double k_boltzmann = 1.380649e-23;       // J/K

}  // namespace twinbeam::constants

namespace twinbeam {

inline constexpr double ev_to_joule(double ev) { return ev * constants::elementary_charge; }
inline constexpr double joule_to_ev(double j) { return j / constants::elementary_charge; }
inline constexpr double nm_to_m(double nm) { return nm * 1e-9; }
inline constexpr double mm_to_m(double mm) { return mm * 1e-3; }

}  // namespace twinbeam
