#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "twinbeam/operators.hpp"

namespace twinbeam {

// Brute-force moment evaluation in a truncated Fock space, independent of
// the Wick contraction path. Supports up to three modes.
class FockSpace {
 public:
  FockSpace(int modes, int dim);

  int modes() const { return modes_; }
  int dim() const { return dim_; }

  // |eta> on mode 0, vacuum elsewhere, truncated and renormalized. Throws
  // TruncationInsufficient when the truncated tail mass exceeds 1e-10.
  Eigen::VectorXcd coherent_vacuum_state(std::complex<double> eta) const;

  Eigen::VectorXcd apply(const OperatorCombo& op, const Eigen::VectorXcd& psi) const;

  // <psi| O_1 ... O_k |psi>. Checks that the intermediate vectors stay away
  // from the truncation boundary (TruncationInsufficient otherwise).
  std::complex<double> moment(std::span<const OperatorCombo> ops,
                              const Eigen::VectorXcd& psi) const;

 private:
  int modes_;
  int dim_;
  long stride_[3];
  long total_;
};

}  // namespace twinbeam
