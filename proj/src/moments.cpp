#include "twinbeam/moments.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace twinbeam {

using cplx = std::complex<double>;

namespace {

double assert_real(cplx value, const char* what) {
  const double scale = std::max(1.0, std::abs(value));
  if (std::abs(value.imag()) > 1e-10 * scale) {
    throw std::runtime_error(std::string("NonRealVariance: ") + what +
                             " has imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace

double mean_intensity(const OperatorCombo& field, cplx eta) {
  const OperatorCombo fd = dagger(field);
  const std::array<OperatorCombo, 2> prod{fd, field};
  return assert_real(wick_moment(prod, eta), "mean intensity");
}

double variance_relative_intensity(const OperatorCombo& e_pr, const OperatorCombo& e_ck,
                                   cplx eta) {
  const OperatorCombo pd = dagger(e_pr);
  const OperatorCombo cd = dagger(e_ck);

  const auto m4 = [&](const OperatorCombo& x1, const OperatorCombo& x2,
                      const OperatorCombo& x3, const OperatorCombo& x4) {
    const std::array<OperatorCombo, 4> prod{x1, x2, x3, x4};
    return wick_moment(prod, eta);
  };
  const auto m2 = [&](const OperatorCombo& x1, const OperatorCombo& x2) {
    const std::array<OperatorCombo, 2> prod{x1, x2};
    return wick_moment(prod, eta);
  };

  const cplx i_pr = m2(pd, e_pr);
  const cplx i_ck = m2(cd, e_ck);
  const cplx var = m4(pd, e_pr, pd, e_pr) - i_pr * i_pr +
                   m4(cd, e_ck, cd, e_ck) - i_ck * i_ck -
                   m4(pd, e_pr, cd, e_ck) - m4(cd, e_ck, pd, e_pr) +
                   2.0 * i_pr * i_ck;
  return assert_real(var, "relative-intensity variance");
}

double variance_snl(const OperatorCombo& e_pr, const OperatorCombo& e_ck, cplx eta) {
  return mean_intensity(e_pr, eta) + mean_intensity(e_ck, eta);
}

double noise_figure(double var, double var_snl) {
  if (!(var_snl > 0.0)) throw std::runtime_error("ZeroSNL: shot-noise variance is not positive");
  return std::log10(var / var_snl);
}

TwoModeResult two_mode_analytic(cplx kappa_pr, cplx kappa_ck, double z, double n_pr) {
  if (kappa_pr == cplx{} || kappa_ck == cplx{}) {
    // g is singular but the dynamics is nilpotent: T = I - iHz exactly.
    // Evaluate through the contraction engine instead of the closed form.
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(2, 2);
    t(0, 1) = z * kappa_pr;
    t(1, 0) = z * std::conj(kappa_ck);
    const OutputOperators ops = output_operator_combos(t, Eigen::VectorXd::Ones(2));
    const OperatorCombo e_ck = dagger(ops.conj_dag[0]);
    const cplx eta{std::sqrt(n_pr), 0.0};
    TwoModeResult out;
    out.var = variance_relative_intensity(ops.probe, e_ck, eta);
    out.var_snl = variance_snl(ops.probe, e_ck, eta);
    out.snf_log10 = noise_figure(out.var, out.var_snl);
    return out;
  }
  const cplx g = std::sqrt(kappa_pr / std::conj(kappa_ck));
  const cplx zeta = z * std::sqrt(std::conj(kappa_ck) * kappa_pr);
  const cplx ch = std::cosh(zeta);
  const cplx sh = std::sinh(zeta);
  const double abs_g2 = std::norm(g);
  const double abs_ch2 = std::norm(ch);
  const double abs_sh2 = std::norm(sh);
  const double cross = abs_ch2 * abs_sh2;  // |cosh sinh|^2
  const cplx shc = std::sinh(std::conj(zeta));
  const double mixed = 2.0 * (ch * ch * shc * shc).real();  // c^2 s*^2 + c*^2 s^2

  TwoModeResult out;
  out.var_snl = abs_g2 * abs_sh2 + abs_sh2 / abs_g2 +
                (abs_ch2 + abs_sh2 / abs_g2) * n_pr;
  const double bracket = abs_ch2 * abs_ch2 + (abs_g2 - 1.0 / abs_g2) * cross - mixed +
                         (abs_sh2 / abs_g2) * (abs_sh2 / abs_g2);
  out.var = bracket * n_pr + (abs_g2 + 1.0 / abs_g2) * cross - mixed;
  out.snf_log10 = noise_figure(out.var, out.var_snl);
  return out;
}

}  // namespace twinbeam
