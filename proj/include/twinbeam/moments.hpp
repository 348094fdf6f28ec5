#pragma once

#include <complex>

#include "twinbeam/operators.hpp"

namespace twinbeam {

// Mean output intensity <E^dag E> for one output-field combo.
double mean_intensity(const OperatorCombo& field, std::complex<double> eta);

// Relative-intensity variance
//   Var = <(Ipr)^2> - <Ipr>^2 + <(Ick)^2> - <Ick>^2
//         - <Ipr Ick> - <Ick Ipr> + 2 <Ipr><Ick>
// for Ipr = Epr^dag Epr, Ick = Eck^dag Eck, on the coherent x vacuum input.
// Throws NonRealVariance when the imaginary residue exceeds 1e-10 relative.
double variance_relative_intensity(const OperatorCombo& e_pr, const OperatorCombo& e_ck,
                                   std::complex<double> eta);

// Shot-noise-limit variance <Epr^dag Epr> + <Eck^dag Eck> with the actual
// output combos on the input state.
double variance_snl(const OperatorCombo& e_pr, const OperatorCombo& e_ck,
                    std::complex<double> eta);

// S_NF = log10(var / var_snl); negative means squeezing.
double noise_figure(double var, double var_snl);

// Minimum-coupling two-mode closed form with g = sqrt(kpr/conj(kck)) and
// zeta = z sqrt(conj(kck) kpr).
struct TwoModeResult {
  double var = 0.0;
  double var_snl = 0.0;
  double snf_log10 = 0.0;
};
TwoModeResult two_mode_analytic(std::complex<double> kappa_pr,
                                std::complex<double> kappa_ck, double z, double n_pr);

// Per-pair photon-statistics report. var/var_snl/snf use the
// photon-number convention (unit commutators, so uncorrelated coherent
// output gives snf = 0 exactly); mean_I_* and *_field carry the
// hbar w^3/(eps0 pi^2 c^3) field normalization.
struct SqueezeReport {
  int k = 0;  // channel index (1-based within the grid)
  int n = 0;
  double omega_c_over_pu = 0.0;
  double mean_I_pr = 0.0;
  double mean_I_ck = 0.0;
  double var = 0.0;
  double var_snl = 0.0;
  double snf_log10 = 0.0;
  double snf_db = 0.0;
  double var_field = 0.0;
  double var_snl_field = 0.0;
  double two_mode_snf_log10 = 0.0;
  double symplectic_residual = 0.0;
  double solver_delta = 0.0;
};

}  // namespace twinbeam
