#include "twinbeam/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace twinbeam {

using cplx = std::complex<double>;

Eigen::MatrixXcd assemble_hmxw(const std::vector<CouplingCoefficients>& kappas) {
  if (kappas.empty()) throw std::invalid_argument("DimensionMismatch: no coupling channels");
  const int dim = static_cast<int>(kappas.size()) + 1;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx i_unit{0.0, 1.0};
  for (int j = 1; j < dim; ++j) {
    H(0, j) = i_unit * kappas[static_cast<size_t>(j - 1)].kappa_pr;
    H(j, 0) = i_unit * std::conj(kappas[static_cast<size_t>(j - 1)].kappa_c);
  }
  return H;
}

cplx arrow_scale(const Eigen::MatrixXcd& H) {
  cplx s{0.0, 0.0};
  for (int j = 1; j < H.cols(); ++j) s += H(0, j) * H(j, 0);
  return s;
}

TransferMatrix transfer_eigen(const Eigen::MatrixXcd& H, double z, double cond_threshold) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("DefectiveMatrix: eigendecomposition failed");
  }
  const Eigen::MatrixXcd& V = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
  const double smin = svd.singularValues().tail(1)(0);
  const double smax = svd.singularValues()(0);
  const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond < cond_threshold)) {
    throw std::runtime_error("DefectiveMatrix: eigenvector condition number " +
                             std::to_string(cond) + " exceeds threshold");
  }
  const cplx minus_i{0.0, -1.0};
  Eigen::VectorXcd phases = (minus_i * z * solver.eigenvalues().array()).exp();
  TransferMatrix out;
  out.T = V * phases.asDiagonal() * V.inverse();
  out.method = "eigen";
  out.condition = cond;
  return out;
}

TransferMatrix transfer_analytic(const Eigen::MatrixXcd& H, double z) {
  const int dim = static_cast<int>(H.rows());
  const cplx s = arrow_scale(H);
  const cplx t{0.0, -z};  // T = exp(tH), H^3 = s H
  const cplx w = std::sqrt(s);
  const cplx x = w * t;
  cplx f1, f2;  // T = I + f1 H + f2 H^2
  if (std::abs(x) < 0.1) {
    // Series in x^2 avoids the cancellation in (cosh(x)-1)/s near s = 0.
    const cplx x2 = x * x;
    f1 = t * (1.0 + x2 * (1.0 / 6.0 + x2 * (1.0 / 120.0 +
              x2 * (1.0 / 5040.0 + x2 / 362880.0))));
    f2 = t * t * (0.5 + x2 * (1.0 / 24.0 + x2 * (1.0 / 720.0 +
                  x2 * (1.0 / 40320.0 + x2 / 3628800.0))));
  } else {
    f1 = std::sinh(x) / w;
    f2 = (std::cosh(x) - 1.0) / s;
  }
  TransferMatrix out;
  out.T = Eigen::MatrixXcd::Identity(dim, dim) + f1 * H + f2 * (H * H);
  out.method = "analytic";
  return out;
}

TransferMatrix transfer_ode_oracle(const Eigen::MatrixXcd& H, double z, int steps) {
  if (steps < 1) throw std::invalid_argument("transfer_ode_oracle: steps must be >= 1");
  const int dim = static_cast<int>(H.rows());
  const double h = z / steps;
  const cplx minus_i{0.0, -1.0};
  const Eigen::MatrixXcd A = minus_i * H;  // V' = A V
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(dim, dim);
  for (int i = 0; i < steps; ++i) {
    const Eigen::MatrixXcd k1 = A * V;
    const Eigen::MatrixXcd k2 = A * (V + 0.5 * h * k1);
    const Eigen::MatrixXcd k3 = A * (V + 0.5 * h * k2);
    const Eigen::MatrixXcd k4 = A * (V + h * k3);
    V += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  TransferMatrix out;
  out.T = std::move(V);
  out.method = "ode";
  return out;
}

double symplectic_residual(const Eigen::MatrixXcd& T, const std::vector<double>& omegas) {
  const int dim = static_cast<int>(T.rows());
  if (static_cast<int>(omegas.size()) != dim) {
    throw std::invalid_argument("DimensionMismatch: omega list vs transfer matrix");
  }
  // Common factors in e_m = sqrt(hbar w^3 / (eps0 pi^2 c^3)) cancel in
  // D^-1 T D; scale by the first mode to keep entries near unity.
  Eigen::VectorXd d(dim);
  for (int m = 0; m < dim; ++m) d(m) = std::pow(omegas[static_cast<size_t>(m)] / omegas[0], 1.5);
  const Eigen::MatrixXcd S = d.cwiseInverse().asDiagonal() * T * d.asDiagonal();
  Eigen::VectorXd eta = -Eigen::VectorXd::Ones(dim);
  eta(0) = 1.0;
  const Eigen::MatrixXcd R = S * eta.asDiagonal() * S.adjoint() -
                             Eigen::MatrixXcd(eta.cast<cplx>().asDiagonal());
  return R.cwiseAbs().maxCoeff();
}

double symplectic_residual(const Eigen::MatrixXcd& T, const ModeGrid& grid) {
  std::vector<double> omegas;
  omegas.reserve(static_cast<size_t>(grid.mode_count()));
  for (int m = 0; m < grid.mode_count(); ++m) omegas.push_back(grid.omega_of_mode(m));
  return symplectic_residual(T, omegas);
}

}  // namespace twinbeam
