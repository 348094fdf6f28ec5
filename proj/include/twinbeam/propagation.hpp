#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "twinbeam/mode_grid.hpp"
#include "twinbeam/susceptibility.hpp"

namespace twinbeam {

// Arrow coupling matrix: row 1 holds i*kappa_pr(w_cj), column 1 holds
// i*conj(kappa_cj), everything else (including the diagonal) is zero.
Eigen::MatrixXcd assemble_hmxw(const std::vector<CouplingCoefficients>& kappas);

// s in the arrow identity H^3 = s H, s = sum_j H(0,j) H(j,0).
std::complex<double> arrow_scale(const Eigen::MatrixXcd& H);

struct TransferMatrix {
  Eigen::MatrixXcd T;
  std::string method;       // eigen | analytic | ode
  double condition = 0.0;   // eigenvector condition estimate (eigen method)
};

// T(z) = exp(-i H z) from the eigendecomposition. Throws
// std::runtime_error("DefectiveMatrix...") when the eigenvector matrix
// condition number exceeds the threshold.
TransferMatrix transfer_eigen(const Eigen::MatrixXcd& H, double z,
                              double cond_threshold = 1e8);

// Closed form from the arrow identity:
//   T = I + H sinh(x)/sqrt(s)*... with x = sqrt(s)*(-i z),
// exact for arrow matrices including the s -> 0 limit.
TransferMatrix transfer_analytic(const Eigen::MatrixXcd& H, double z);

// Classical RK4 integration of i dV/dz = H V from the identity.
TransferMatrix transfer_ode_oracle(const Eigen::MatrixXcd& H, double z, int steps);

// Rescale to the annihilation-operator basis with D = diag(omega^{3/2})
// and return ||S eta S^dag - eta||_max, eta = diag(+1, -1, ..., -1).
double symplectic_residual(const Eigen::MatrixXcd& T, const std::vector<double>& omegas);
double symplectic_residual(const Eigen::MatrixXcd& T, const ModeGrid& grid);

}  // namespace twinbeam
