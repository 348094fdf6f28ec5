#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace twinbeam {

// Gaussian quadratic form of the output Wigner distribution,
//   W(u) = exp(-u^T M u - 2 L^T u - d) / Z,
// over the real quadrature vector u = (x_pr, p_pr, x_c1, p_c1, ...), with
// alpha = (x + i p)/sqrt(2) and normalization over the product d^2(alpha)
// measure. Throws SingularQuadraticForm when M is not positive definite.
struct WignerForm {
  int n_modes = 0;              // N + 1
  Eigen::MatrixXd M;
  Eigen::VectorXd L;
  double d = 0.0;
  double log_norm = 0.0;        // log Z
  Eigen::MatrixXd covariance;   // true quadrature second moments, M^-1 / 2
  Eigen::VectorXd peak;         // -M^-1 L
};

WignerForm build_wigner_form(const Eigen::MatrixXcd& T, std::complex<double> eta);

// Normalized Wigner value at one quadrature point.
double wigner_value(const WignerForm& form, const Eigen::VectorXd& u);

// Quadrature covariance matrix of the output Gaussian (cross-validates the
// squeezed/antisqueezed directions found by the moment engine).
Eigen::MatrixXd wigner_covariance(const Eigen::MatrixXcd& T);

struct WignerGrid {
  int mode_pr = 0;              // always the probe
  int mode_ck = 0;              // grid channel index, 1-based
  std::vector<double> x_pr;
  std::vector<double> x_ck;
  Eigen::MatrixXd values;       // values(i, j) = W(x_pr[i], x_ck[j])
  double analytic_slice_integral = 0.0;
};

// 2D slice over (x_pr, x_ck) with every other quadrature fixed (default 0,
// the p_c = p_pr = 0 convention).
WignerGrid wigner_slice_2d(const WignerForm& form, int channel_k, double x_min, double x_max,
                           int samples, const Eigen::VectorXd* fixed = nullptr);

}  // namespace twinbeam
