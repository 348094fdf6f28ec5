#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "twinbeam/constants.hpp"
#include "twinbeam/propagation.hpp"
#include "twinbeam/susceptibility.hpp"
#include "twinbeam/wigner.hpp"

using namespace twinbeam;
using cplx = std::complex<double>;

namespace {

Eigen::MatrixXcd two_mode_transfer(cplx kpr, cplx kc, double z) {
  std::vector<CouplingCoefficients> ks(1);
  ks[0].kappa_pr = kpr;
  ks[0].kappa_c = kc;
  return transfer_analytic(assemble_hmxw(ks), z).T;
}

}  // namespace

TEST_CASE("vacuum Wigner function: isotropic Gaussian, peak (2/pi)^(N+1)") {
  const int n = 3;
  const Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(n, n);
  const WignerForm form = build_wigner_form(t, cplx{0.0, 0.0});

  const double peak = std::pow(2.0 / constants::pi, n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * n);
  CHECK(wigner_value(form, u) == doctest::Approx(peak).epsilon(1e-12));
  // isotropy: same value at |u| = 1 in any single coordinate
  for (int i = 0; i < 2 * n; ++i) {
    u.setZero();
    u(i) = 1.0;
    CHECK(wigner_value(form, u) == doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-12));
  }
  // vacuum quadrature variance is 1/2
  CHECK((form.covariance - 0.5 * Eigen::MatrixXd::Identity(2 * n, 2 * n))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("displacement moves the peak without touching the covariance") {
  const int n = 2;
  const Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(n, n);
  const cplx eta{1.5, -0.7};
  const WignerForm form = build_wigner_form(t, eta);
  const WignerForm vac = build_wigner_form(t, cplx{0.0, 0.0});

  CHECK(form.peak(0) == doctest::Approx(std::sqrt(2.0) * eta.real()).epsilon(1e-12));
  CHECK(form.peak(1) == doctest::Approx(std::sqrt(2.0) * eta.imag()).epsilon(1e-12));
  CHECK(form.peak(2) == doctest::Approx(0.0));
  CHECK((form.covariance - vac.covariance).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd u = form.peak;
  CHECK(wigner_value(form, u) == doctest::Approx(std::pow(2.0 / constants::pi, n)).epsilon(1e-10));
}

TEST_CASE("two-mode squeezing: x_pr - x_c narrowed by exp(-2 zeta)") {
  for (double zeta : {0.4, 1.0}) {
    const cplx k{-zeta, 0.0};
    const Eigen::MatrixXcd t = two_mode_transfer(k, k, 1.0);
    const Eigen::MatrixXd cov = wigner_covariance(t);
    const double var_minus = cov(0, 0) + cov(2, 2) - 2.0 * cov(0, 2);  // 2 Var((x1-x2)/sqrt2)
    const double var_plus = cov(0, 0) + cov(2, 2) + 2.0 * cov(0, 2);
    CHECK(var_minus == doctest::Approx(std::exp(-2.0 * zeta)).epsilon(1e-10));
    CHECK(var_plus == doctest::Approx(std::exp(2.0 * zeta)).epsilon(1e-10));
  }
}

TEST_CASE("values are nonnegative and the slice matches its closed-form integral") {
  const cplx k{-0.8, 0.0};
  const Eigen::MatrixXcd t = two_mode_transfer(k, k, 1.0);
  const WignerForm form = build_wigner_form(t, cplx{1.2, 0.4});

  const WignerGrid grid = wigner_slice_2d(form, 1, -14.0, 14.0, 561);
  double numeric = 0.0;
  const double step = grid.x_pr[1] - grid.x_pr[0];
  for (int i = 0; i < grid.values.rows(); ++i) {
    for (int j = 0; j < grid.values.cols(); ++j) {
      CHECK(grid.values(i, j) >= 0.0);
      const double wi = (i == 0 || i == grid.values.rows() - 1) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == grid.values.cols() - 1) ? 0.5 : 1.0;
      numeric += wi * wj * grid.values(i, j);
    }
  }
  numeric *= step * step;
  CHECK(numeric == doctest::Approx(grid.analytic_slice_integral).epsilon(1e-3));
}

TEST_CASE("slice argument validation") {
  const Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(2, 2);
  const WignerForm form = build_wigner_form(t, cplx{0.0, 0.0});
  CHECK_THROWS_AS(wigner_slice_2d(form, 0, -1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(wigner_slice_2d(form, 2, -1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(wigner_slice_2d(form, 1, -1.0, 1.0, 1), std::invalid_argument);
  Eigen::VectorXd bad(3);
  CHECK_THROWS_AS(wigner_value(form, bad), std::invalid_argument);
}
