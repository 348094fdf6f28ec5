#include "twinbeam/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "twinbeam/constants.hpp"

namespace twinbeam {

using cplx = std::complex<double>;

OperatorCombo dagger(const OperatorCombo& c) {
  OperatorCombo d;
  d.constant = std::conj(c.constant);
  d.a = c.adag.conjugate();
  d.adag = c.a.conjugate();
  return d;
}

Eigen::VectorXd field_norm_factors(const ModeGrid& grid) {
  using namespace constants;
  Eigen::VectorXd e(grid.mode_count());
  for (int m = 0; m < grid.mode_count(); ++m) {
    const double w = grid.omega_of_mode(m);
    e(m) = std::sqrt(hbar * w * w * w / (epsilon0 * pi * pi * c_light * c_light * c_light));
  }
  return e;
}

OutputOperators output_operator_combos(const Eigen::MatrixXcd& T,
                                       const Eigen::VectorXd& e_factors) {
  const int dim = static_cast<int>(T.rows());
  if (e_factors.size() != dim) {
    throw std::invalid_argument("DimensionMismatch: e_factors vs transfer matrix");
  }
  OutputOperators out;
  out.probe = OperatorCombo::zero(dim);
  out.probe.a(0) = T(0, 0) * e_factors(0);
  for (int j = 1; j < dim; ++j) out.probe.adag(j) = T(0, j) * e_factors(j);

  out.conj_dag.reserve(static_cast<size_t>(dim - 1));
  for (int k = 1; k < dim; ++k) {
    OperatorCombo c = OperatorCombo::zero(dim);
    c.a(0) = T(k, 0) * e_factors(0);
    for (int j = 1; j < dim; ++j) c.adag(j) = T(k, j) * e_factors(j);
    out.conj_dag.push_back(std::move(c));
  }
  return out;
}

namespace {

// Order-preserving vacuum Wick recursion over the zero-mean operator parts,
// with each factor allowed to contribute its displaced c-number instead.
cplx wick_recurse(const std::vector<cplx>& c, const Eigen::MatrixXcd& contraction,
                  std::vector<int>& idx) {
  if (idx.empty()) return {1.0, 0.0};
  const int first = idx.front();
  std::vector<int> rest(idx.begin() + 1, idx.end());
  cplx total = c[static_cast<size_t>(first)] * wick_recurse(c, contraction, rest);
  for (size_t j = 0; j < rest.size(); ++j) {
    const int partner = rest[j];
    std::vector<int> remaining;
    remaining.reserve(rest.size() - 1);
    for (size_t m = 0; m < rest.size(); ++m) {
      if (m != j) remaining.push_back(rest[m]);
    }
    total += contraction(first, partner) * wick_recurse(c, contraction, remaining);
  }
  return total;
}

}  // namespace

cplx wick_moment(std::span<const OperatorCombo> ops, cplx eta) {
  const int count = static_cast<int>(ops.size());
  if (count == 0) return {1.0, 0.0};
  if (count > 4) throw std::invalid_argument("UnsupportedOrder: wick_moment supports <= 4 factors");

  // Displace the probe mode: a_0 -> eta + a~_0 turns part of each combo
  // into a c-number; what remains is zero-mean on the vacuum.
  std::vector<cplx> c(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    c[static_cast<size_t>(i)] =
        ops[i].constant + ops[i].a(0) * eta + ops[i].adag(0) * std::conj(eta);
  }
  // <O_i O_j> on vacuum: only <a~ a~dag> = 1 survives, i strictly before j.
  Eigen::MatrixXcd contraction = Eigen::MatrixXcd::Zero(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      contraction(i, j) = (ops[i].a.array() * ops[j].adag.array()).sum();
    }
  }
  std::vector<int> idx(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) idx[static_cast<size_t>(i)] = i;
  return wick_recurse(c, contraction, idx);
}

}  // namespace twinbeam
