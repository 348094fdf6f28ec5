#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "twinbeam/mode_grid.hpp"

namespace twinbeam {

// Linear combination of input-mode annihilation/creation operators plus a
// c-number: the substrate for Wick-theorem moment evaluation. Mode 0 is the
// probe; any field-normalization factors are folded into the coefficients.
struct OperatorCombo {
  std::complex<double> constant{0.0, 0.0};
  Eigen::VectorXcd a;     // multiplies annihilation operators
  Eigen::VectorXcd adag;  // multiplies creation operators

  static OperatorCombo zero(int modes) {
    OperatorCombo c;
    c.a = Eigen::VectorXcd::Zero(modes);
    c.adag = Eigen::VectorXcd::Zero(modes);
    return c;
  }
};

OperatorCombo dagger(const OperatorCombo& c);

struct OutputOperators {
  OperatorCombo probe;                     // E_pr(z)
  std::vector<OperatorCombo> conj_dag;     // E_ck^dag(z), one per channel
};

// Field-normalization factors e_m = sqrt(hbar w_m^3 / (eps0 pi^2 c^3)).
Eigen::VectorXd field_norm_factors(const ModeGrid& grid);

// Input-output relations: E_pr(z) = T11 E_pr(0) + sum_j T1,j+1 E_cj^dag(0),
// E_ck^dag(z) = Tk+1,1 E_pr(0) + sum_j Tk+1,j+1 E_cj^dag(0), with the given
// per-mode normalization factors folded (pass all-ones for the
// photon-number convention).
OutputOperators output_operator_combos(const Eigen::MatrixXcd& T,
                                       const Eigen::VectorXd& e_factors);

// Exact expectation of an ordered product of up to four combos on the
// coherent(probe) x vacuum input state, by displacement plus vacuum Wick
// contractions. Throws on products longer than four.
std::complex<double> wick_moment(std::span<const OperatorCombo> ops,
                                 std::complex<double> eta);

}  // namespace twinbeam
