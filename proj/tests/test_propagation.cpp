#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "twinbeam/propagation.hpp"
#include "twinbeam/susceptibility.hpp"

using namespace twinbeam;
using cplx = std::complex<double>;

namespace {

Eigen::MatrixXcd arrow_from(const std::vector<cplx>& kpr, const std::vector<cplx>& kc) {
  std::vector<CouplingCoefficients> ks(kpr.size());
  for (size_t i = 0; i < kpr.size(); ++i) {
    ks[i].kappa_pr = kpr[i];
    ks[i].kappa_c = kc[i];
  }
  return assemble_hmxw(ks);
}

cplx rand_cplx(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * 3.14159265358979323846);
  const double p = ph(rng);
  return mag(rng) * cplx{std::cos(p), std::sin(p)};
}

double rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("arrow assembly: first row/column only, H^3 = sH") {
  const Eigen::MatrixXcd h = arrow_from({{0.3, 0.1}, {-0.2, 0.4}}, {{0.5, -0.3}, {0.1, 0.2}});
  REQUIRE(h.rows() == 3);
  CHECK(h(0, 0) == cplx{0.0, 0.0});
  CHECK(h(1, 1) == cplx{0.0, 0.0});
  CHECK(h(1, 2) == cplx{0.0, 0.0});
  CHECK(h(2, 1) == cplx{0.0, 0.0});
  CHECK(h(0, 1) == cplx{0.0, 1.0} * cplx{0.3, 0.1});
  CHECK(h(1, 0) == cplx{0.0, 1.0} * std::conj(cplx{0.5, -0.3}));

  const cplx s = arrow_scale(h);
  CHECK(rel_diff(h * h * h, s * h) < 1e-15);

  CHECK_THROWS_WITH_AS(assemble_hmxw({}), doctest::Contains("DimensionMismatch"),
                       std::invalid_argument);
}

TEST_CASE("single channel reduces to the cosh/sinh two-mode form") {
  const cplx kpr{0.21, -0.13};
  const cplx kc{-0.34, 0.27};
  const double z = 1.7;
  const Eigen::MatrixXcd h = arrow_from({kpr}, {kc});
  const Eigen::MatrixXcd t = transfer_analytic(h, z).T;

  const cplx zeta = z * std::sqrt(std::conj(kc) * kpr);
  const cplx g = std::sqrt(kpr / std::conj(kc));
  CHECK(std::abs(t(0, 0) - std::cosh(zeta)) < 1e-12);
  CHECK(std::abs(t(1, 1) - std::cosh(zeta)) < 1e-12);
  CHECK(std::abs(t(0, 1) - g * std::sinh(zeta)) < 1e-12);
  CHECK(std::abs(t(1, 0) - std::sinh(zeta) / g) < 1e-12);
}

TEST_CASE("three solvers agree on random couplings") {
  std::mt19937_64 rng(20240817);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<int> nd(1, 8);
    const int n = nd(rng);
    std::vector<cplx> kpr(n), kc(n);
    for (int i = 0; i < n; ++i) {
      kpr[i] = rand_cplx(rng, 0.05, 1.2);
      kc[i] = rand_cplx(rng, 0.05, 1.2);
    }
    const Eigen::MatrixXcd h = arrow_from(kpr, kc);
    const Eigen::MatrixXcd ta = transfer_analytic(h, 1.0).T;
    const Eigen::MatrixXcd to = transfer_ode_oracle(h, 1.0, 10000).T;
    worst = std::max(worst, rel_diff(ta, to));
    try {
      const Eigen::MatrixXcd te = transfer_eigen(h, 1.0).T;
      worst = std::max(worst, rel_diff(ta, te));
    } catch (const std::runtime_error&) {
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("nilpotent coupling: analytic handles s = 0, eigen route reports defect") {
  // kappa_pr orthogonal to conj(kappa_c): s = sum H(0,j) H(j,0) = 0.
  const Eigen::MatrixXcd h = arrow_from({{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}});
  CHECK(std::abs(arrow_scale(h)) < 1e-15);

  const double z = 0.8;
  const Eigen::MatrixXcd t = transfer_analytic(h, z).T;
  // exp(-iHz) = I - iHz - z^2 H^2 / 2 exactly (H^3 = 0)
  const Eigen::MatrixXcd ref = Eigen::MatrixXcd::Identity(3, 3) -
                               cplx{0.0, 1.0} * z * h - 0.5 * z * z * h * h;
  CHECK(rel_diff(t, ref) < 1e-14);
  CHECK(rel_diff(t, transfer_ode_oracle(h, z, 10000).T) < 1e-10);

  CHECK_THROWS_WITH_AS(transfer_eigen(h, z), doctest::Contains("DefectiveMatrix"),
                       std::runtime_error);
}

TEST_CASE("semigroup and identity limits") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXcd h =
      arrow_from({rand_cplx(rng, 0.1, 1.0), rand_cplx(rng, 0.1, 1.0)},
                 {rand_cplx(rng, 0.1, 1.0), rand_cplx(rng, 0.1, 1.0)});
  const Eigen::MatrixXcd t0 = transfer_analytic(h, 0.0).T;
  CHECK(rel_diff(t0, Eigen::MatrixXcd::Identity(3, 3)) == 0.0);

  const Eigen::MatrixXcd lhs = transfer_analytic(h, 0.7).T * transfer_analytic(h, 0.5).T;
  const Eigen::MatrixXcd rhs = transfer_analytic(h, 1.2).T;
  CHECK(rel_diff(lhs, rhs) < 1e-13);
}

TEST_CASE("small argument branch avoids cancellation") {
  std::mt19937_64 rng(99);
  for (double scale : {1e-9, 1e-5, 0.09, 0.11}) {
    std::vector<cplx> kpr{rand_cplx(rng, 0.5, 1.0)}, kc{rand_cplx(rng, 0.5, 1.0)};
    kpr[0] *= scale;
    kc[0] *= scale;
    const Eigen::MatrixXcd h = arrow_from(kpr, kc);
    const Eigen::MatrixXcd ta = transfer_analytic(h, 1.0).T;
    const Eigen::MatrixXcd to = transfer_ode_oracle(h, 1.0, 10000).T;
    CHECK(rel_diff(ta, to) < 1e-12);
  }
}

TEST_CASE("ODE oracle converges at fourth order") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXcd h =
      arrow_from({rand_cplx(rng, 0.3, 1.0), rand_cplx(rng, 0.3, 1.0)},
                 {rand_cplx(rng, 0.3, 1.0), rand_cplx(rng, 0.3, 1.0)});
  const Eigen::MatrixXcd exact = transfer_analytic(h, 1.0).T;
  const double e1 = (transfer_ode_oracle(h, 1.0, 50).T - exact).cwiseAbs().maxCoeff();
  const double e2 = (transfer_ode_oracle(h, 1.0, 100).T - exact).cwiseAbs().maxCoeff();
  const double e3 = (transfer_ode_oracle(h, 1.0, 200).T - exact).cwiseAbs().maxCoeff();
  const double order = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("symplectic residual vanishes for balanced couplings") {
  // |g|^2 = (omega_pr/omega_c)^3 makes the rescaled transform symplectic.
  const std::vector<double> omegas{1.0, 2.0};
  const double ratio = std::pow(omegas[1] / omegas[0], 3.0);  // |kc/kpr| required
  const cplx kpr{0.4, 0.0};
  const cplx kc{0.4 * ratio, 0.0};
  const Eigen::MatrixXcd h = arrow_from({kpr}, {kc});
  const Eigen::MatrixXcd t = transfer_analytic(h, 1.0).T;
  CHECK(symplectic_residual(t, omegas) < 1e-12);

  // unbalanced couplings leave a visible residual
  const Eigen::MatrixXcd h2 = arrow_from({kpr}, {cplx{4.0 * kc.real(), 0.0}});
  CHECK(symplectic_residual(transfer_analytic(h2, 1.0).T, omegas) > 1e-3);
}
