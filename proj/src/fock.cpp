#include "twinbeam/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace twinbeam {

using cplx = std::complex<double>;

FockSpace::FockSpace(int modes, int dim) : modes_(modes), dim_(dim) {
  if (modes < 1 || modes > 3) throw std::invalid_argument("FockSpace supports 1..3 modes");
  if (dim < 2) throw std::invalid_argument("FockSpace: truncation dimension must be >= 2");
  total_ = 1;
  for (int m = modes - 1; m >= 0; --m) {
    stride_[m] = total_;
    total_ *= dim;
  }
}

Eigen::VectorXcd FockSpace::coherent_vacuum_state(cplx eta) const {
  Eigen::VectorXcd amp(dim_);
  // c_n = eta^n / sqrt(n!) times exp(-|eta|^2/2)
  cplx cn{1.0, 0.0};
  amp(0) = cn;
  for (int n = 1; n < dim_; ++n) {
    cn *= eta / std::sqrt(static_cast<double>(n));
    amp(n) = cn;
  }
  const double norm_full = std::exp(std::norm(eta));
  const double norm_trunc = amp.squaredNorm();
  const double tail = 1.0 - norm_trunc / norm_full;
  if (tail > 1e-10) {
    throw std::runtime_error("TruncationInsufficient: coherent tail mass " +
                             std::to_string(tail));
  }
  amp /= std::sqrt(norm_trunc);

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(total_);
  for (int n = 0; n < dim_; ++n) psi(n * stride_[0]) = amp(n);
  return psi;
}

Eigen::VectorXcd FockSpace::apply(const OperatorCombo& op, const Eigen::VectorXcd& psi) const {
  if (op.a.size() != modes_ || op.adag.size() != modes_) {
    throw std::invalid_argument("DimensionMismatch: combo modes vs Fock space");
  }
  Eigen::VectorXcd out = op.constant * psi;
  for (int m = 0; m < modes_; ++m) {
    const cplx ca = op.a(m);
    const cplx cd = op.adag(m);
    if (ca == cplx{} && cd == cplx{}) continue;
    const long s = stride_[m];
    for (long idx = 0; idx < total_; ++idx) {
      const int n = static_cast<int>((idx / s) % dim_);
      // (a psi)[n] = sqrt(n+1) psi[n+1]; (adag psi)[n] = sqrt(n) psi[n-1]
      if (ca != cplx{} && n + 1 < dim_) out(idx) += ca * std::sqrt(n + 1.0) * psi(idx + s);
      if (cd != cplx{} && n > 0) out(idx) += cd * std::sqrt(static_cast<double>(n)) * psi(idx - s);
    }
  }
  return out;
}

cplx FockSpace::moment(std::span<const OperatorCombo> ops, const Eigen::VectorXcd& psi) const {
  Eigen::VectorXcd phi = psi;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    phi = apply(*it, phi);
    // Population near the truncation boundary signals leakage.
    double boundary = 0.0;
    for (int m = 0; m < modes_; ++m) {
      const long s = stride_[m];
      for (long idx = 0; idx < total_; ++idx) {
        const int n = static_cast<int>((idx / s) % dim_);
        if (n >= dim_ - 2) boundary += std::norm(phi(idx));
      }
    }
    const double total = phi.squaredNorm();
    if (total > 0.0 && boundary / total > 1e-8) {
      throw std::runtime_error("TruncationInsufficient: operator leakage at Fock boundary");
    }
  }
  return psi.dot(phi);
}

}  // namespace twinbeam
