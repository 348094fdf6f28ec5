#include "twinbeam/wigner.hpp"

#include <cmath>
#include <stdexcept>

#include "twinbeam/constants.hpp"

namespace twinbeam {

using cplx = std::complex<double>;

WignerForm build_wigner_form(const Eigen::MatrixXcd& T, cplx eta) {
  const int n = static_cast<int>(T.rows());  // N + 1 modes
  const int dim = 2 * n;                     // (x, p) per mode
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // Complex linear forms F_k(u) + c_k whose squared magnitudes build the
  // exponent -2 sum_k |F_k + c_k|^2:
  //   F_0 = T11 alpha + sum_m T1m beta*_{m-1} - eta
  //   F_j = conj(T_{j+1,1}) alpha* + sum_m conj(T_{j+1,m}) beta_{m-1}
  Eigen::MatrixXcd forms = Eigen::MatrixXcd::Zero(n, dim);
  Eigen::VectorXcd consts = Eigen::VectorXcd::Zero(n);

  // alpha = (x0 + i p0)/sqrt2, beta_j = (x_j + i p_j)/sqrt2
  forms(0, 0) = T(0, 0) * inv_sqrt2;
  forms(0, 1) = T(0, 0) * cplx{0.0, 1.0} * inv_sqrt2;
  for (int m = 1; m < n; ++m) {
    forms(0, 2 * m) = T(0, m) * inv_sqrt2;                       // beta* -> (x - i p)
    forms(0, 2 * m + 1) = T(0, m) * cplx{0.0, -1.0} * inv_sqrt2;
  }
  consts(0) = -eta;
  for (int j = 1; j < n; ++j) {
    forms(j, 0) = std::conj(T(j, 0)) * inv_sqrt2;                // alpha*
    forms(j, 1) = std::conj(T(j, 0)) * cplx{0.0, -1.0} * inv_sqrt2;
    for (int m = 1; m < n; ++m) {
      forms(j, 2 * m) = std::conj(T(j, m)) * inv_sqrt2;          // beta
      forms(j, 2 * m + 1) = std::conj(T(j, m)) * cplx{0.0, 1.0} * inv_sqrt2;
    }
  }

  WignerForm form;
  form.n_modes = n;
  form.M = Eigen::MatrixXd::Zero(dim, dim);
  form.L = Eigen::VectorXd::Zero(dim);
  form.d = 0.0;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd r = forms.row(k).real();
    const Eigen::VectorXd s = forms.row(k).imag();
    form.M += 2.0 * (r * r.transpose() + s * s.transpose());
    form.L += 2.0 * (consts(k).real() * r + consts(k).imag() * s);
    form.d += 2.0 * std::norm(consts(k));
  }

  Eigen::LLT<Eigen::MatrixXd> llt(form.M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("SingularQuadraticForm: Wigner quadratic form is degenerate");
  }
  const Eigen::VectorXd minv_l = llt.solve(form.L);
  double log_det = 0.0;
  for (int i = 0; i < dim; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  // Z over the product d^2(alpha) = dx dp / 2 measure.
  form.log_norm = -n * std::log(2.0) + n * std::log(constants::pi) - 0.5 * log_det +
                  (form.L.dot(minv_l) - form.d);
  form.covariance = 0.5 * llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  form.peak = -minv_l;
  return form;
}

double wigner_value(const WignerForm& form, const Eigen::VectorXd& u) {
  if (u.size() != form.M.rows()) {
    throw std::invalid_argument("DimensionMismatch: quadrature point vs Wigner form");
  }
  const double expo = -u.dot(form.M * u) - 2.0 * form.L.dot(u) - form.d;
  return std::exp(expo - form.log_norm);
}

Eigen::MatrixXd wigner_covariance(const Eigen::MatrixXcd& T) {
  return build_wigner_form(T, cplx{0.0, 0.0}).covariance;
}

WignerGrid wigner_slice_2d(const WignerForm& form, int channel_k, double x_min, double x_max,
                           int samples, const Eigen::VectorXd* fixed) {
  if (samples < 2) throw std::invalid_argument("wigner_slice_2d: samples must be >= 2");
  if (channel_k < 1 || channel_k >= form.n_modes) {
    throw std::invalid_argument("wigner_slice_2d: channel index outside grid");
  }
  const int dim = 2 * form.n_modes;
  const int ix = 0;                // x_pr
  const int jx = 2 * channel_k;   // x_ck
  Eigen::VectorXd base = fixed ? *fixed : Eigen::VectorXd::Zero(dim);
  base(ix) = 0.0;
  base(jx) = 0.0;

  WignerGrid grid;
  grid.mode_pr = 0;
  grid.mode_ck = channel_k;
  grid.x_pr.resize(static_cast<size_t>(samples));
  grid.x_ck.resize(static_cast<size_t>(samples));
  grid.values.resize(samples, samples);
  const double step = (x_max - x_min) / (samples - 1);
  for (int i = 0; i < samples; ++i) grid.x_pr[static_cast<size_t>(i)] = x_min + i * step;
  for (int j = 0; j < samples; ++j) grid.x_ck[static_cast<size_t>(j)] = x_min + j * step;

  Eigen::VectorXd u = base;
  for (int i = 0; i < samples; ++i) {
    u(ix) = grid.x_pr[static_cast<size_t>(i)];
    for (int j = 0; j < samples; ++j) {
      u(jx) = grid.x_ck[static_cast<size_t>(j)];
      grid.values(i, j) = wigner_value(form, u);
    }
  }

  // Closed-form integral of the same 2D slice (others held at `base`):
  // restrict the Gaussian to coordinates (ix, jx).
  Eigen::Matrix2d A;
  A << form.M(ix, ix), form.M(ix, jx), form.M(jx, ix), form.M(jx, jx);
  const Eigen::VectorXd mb = form.M * base + form.L;
  Eigen::Vector2d b(mb(ix), mb(jx));
  const double f0 = -base.dot(form.M * base) - 2.0 * form.L.dot(base) - form.d;
  const double det_a = A.determinant();
  if (!(det_a > 0.0)) {
    throw std::runtime_error("SingularQuadraticForm: degenerate 2D slice");
  }
  grid.analytic_slice_integral =
      constants::pi / std::sqrt(det_a) *
      std::exp(b.dot(A.inverse() * b) + f0 - form.log_norm);
  return grid;
}

}  // namespace twinbeam
