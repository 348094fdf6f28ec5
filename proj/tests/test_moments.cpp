#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "twinbeam/fock.hpp"
#include "twinbeam/moments.hpp"
#include "twinbeam/operators.hpp"
#include "twinbeam/propagation.hpp"
#include "twinbeam/susceptibility.hpp"

using namespace twinbeam;
using cplx = std::complex<double>;

namespace {

Eigen::MatrixXcd two_mode_transfer(cplx kpr, cplx kc, double z) {
  std::vector<CouplingCoefficients> ks(1);
  ks[0].kappa_pr = kpr;
  ks[0].kappa_c = kc;
  return transfer_analytic(assemble_hmxw(ks), z).T;
}

cplx rand_cplx(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * 3.14159265358979323846);
  const double p = ph(rng);
  return mag(rng) * cplx{std::cos(p), std::sin(p)};
}

}  // namespace

TEST_CASE("identity transfer: coherent probe passes through") {
  const Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(3, 3);
  const OutputOperators ops = output_operator_combos(t, Eigen::VectorXd::Ones(3));
  const cplx eta{7.0, -2.0};
  CHECK(mean_intensity(ops.probe, eta) == doctest::Approx(std::norm(eta)).epsilon(1e-14));
  const OperatorCombo e_c1 = dagger(ops.conj_dag[0]);
  CHECK(mean_intensity(e_c1, eta) == doctest::Approx(0.0));

  const double var = variance_relative_intensity(ops.probe, e_c1, eta);
  const double snl = variance_snl(ops.probe, e_c1, eta);
  CHECK(var == doctest::Approx(std::norm(eta)).epsilon(1e-12));
  CHECK(snl == doctest::Approx(std::norm(eta)).epsilon(1e-12));
  CHECK(noise_figure(var, snl) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("noise figure guards against a zero shot-noise baseline") {
  CHECK_THROWS_WITH_AS(noise_figure(1.0, 0.0), doctest::Contains("ZeroSNL"),
                       std::runtime_error);
}

TEST_CASE("wick engine rejects products beyond fourth order") {
  const OperatorCombo c = OperatorCombo::zero(2);
  const std::vector<OperatorCombo> five(5, c);
  CHECK_THROWS_WITH_AS((void)wick_moment(five, cplx{0.0, 0.0}),
                       doctest::Contains("UnsupportedOrder"), std::invalid_argument);
}

TEST_CASE("wick moments match the truncated-Fock oracle") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> coeff(-0.3, 0.3);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int modes = 2 + (trial % 2);
    const cplx eta{coeff(rng) * 3.0, coeff(rng) * 3.0};
    OperatorCombo e_pr = OperatorCombo::zero(modes);
    OperatorCombo e_ck = OperatorCombo::zero(modes);
    for (int m = 0; m < modes; ++m) {
      e_pr.a(m) = {coeff(rng), coeff(rng)};
      e_pr.adag(m) = {coeff(rng), coeff(rng)};
      e_ck.a(m) = {coeff(rng), coeff(rng)};
      e_ck.adag(m) = {coeff(rng), coeff(rng)};
    }
    e_pr.a(0) += 1.0;

    const FockSpace fock(modes, 40);
    const Eigen::VectorXcd psi = fock.coherent_vacuum_state(eta);
    const OperatorCombo pr_d = dagger(e_pr), ck_d = dagger(e_ck);
    const std::array<std::vector<OperatorCombo>, 4> prods = {
        std::vector<OperatorCombo>{pr_d, e_pr},
        std::vector<OperatorCombo>{ck_d, e_ck},
        std::vector<OperatorCombo>{pr_d, e_pr, ck_d, e_ck},
        std::vector<OperatorCombo>{pr_d, e_pr, pr_d, e_pr},
    };
    for (const auto& p : prods) {
      worst = std::max(worst, std::abs(wick_moment(p, eta) - fock.moment(p, psi)));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("fock oracle detects insufficient truncation") {
  const FockSpace fock(1, 12);
  CHECK_THROWS_WITH_AS(fock.coherent_vacuum_state(cplx{3.5, 0.0}),
                       doctest::Contains("TruncationInsufficient"), std::runtime_error);
  CHECK_THROWS_AS(FockSpace(4, 10), std::invalid_argument);
}

TEST_CASE("matrix pipeline reproduces the two-mode closed form") {
  std::mt19937_64 rng(1618);
  std::uniform_real_distribution<double> zd(0.1, 2.0);
  std::uniform_real_distribution<double> nd(0.0, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const cplx kpr = rand_cplx(rng, 0.05, 1.2);
    const cplx kc = rand_cplx(rng, 0.05, 1.2);
    const double z = zd(rng);
    const double n_pr = std::pow(10.0, nd(rng));

    const Eigen::MatrixXcd t = two_mode_transfer(kpr, kc, z);
    const OutputOperators ops = output_operator_combos(t, Eigen::VectorXd::Ones(2));
    const OperatorCombo e_ck = dagger(ops.conj_dag[0]);
    const cplx eta{std::sqrt(n_pr), 0.0};
    const double var = variance_relative_intensity(ops.probe, e_ck, eta);
    const double snl = variance_snl(ops.probe, e_ck, eta);

    const TwoModeResult ref = two_mode_analytic(kpr, kc, z, n_pr);
    worst = std::max(worst, std::abs(var - ref.var) / std::abs(ref.var));
    worst = std::max(worst, std::abs(snl - ref.var_snl) / std::abs(ref.var_snl));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("balanced two-mode squeezing: var stays at N_pr, snf negative") {
  for (double zeta : {0.1, 0.5, 1.0, 2.0}) {
    for (double n_pr : {1.0, 1.0e2, 1.0e4}) {
      const cplx k{-zeta, 0.0};
      const TwoModeResult r = two_mode_analytic(k, k, 1.0, n_pr);
      CHECK(r.var == doctest::Approx(n_pr).epsilon(1e-10));
      CHECK(r.snf_log10 < 0.0);
      // var_snl = (N + (N+1) sinh^2) cosh^2-style growth beats var
      CHECK(r.var_snl > n_pr);
    }
  }
}

TEST_CASE("frozen noise-figure point") {
  // g = 1, zeta = 1, N = 100:
  //   var = 100, var_snl = 2 sinh(1)^2 + 100 (cosh(1)^2 + sinh(1)^2) approx 378.98
  const cplx k{-1.0, 0.0};
  const TwoModeResult r = two_mode_analytic(k, k, 1.0, 100.0);
  CHECK(r.var == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(r.var_snl == doctest::Approx(378.98177).epsilon(1e-6));
  CHECK(r.snf_log10 == doctest::Approx(-0.578618).epsilon(1e-5));
}

TEST_CASE("zero coupling collapses the closed form to the shot-noise limit") {
  const TwoModeResult r = two_mode_analytic(cplx{0.0, 0.0}, cplx{0.0, 0.0}, 1.0, 50.0);
  CHECK(r.var == doctest::Approx(50.0));
  CHECK(r.var_snl == doctest::Approx(50.0));
  CHECK(r.snf_log10 == doctest::Approx(0.0));
}
