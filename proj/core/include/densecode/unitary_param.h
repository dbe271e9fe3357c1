// Copyright 2026 The densecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "densecode/config.h"
#include "densecode/levenberg_marquardt.h"
#include "densecode/qstate.h"

namespace densecode {

// Hermitian d x d matrices are coordinatized by d^2 reals: the d diagonal
// entries, then (Re, Im) of each upper-triangular entry in row-major order.
CMatrix hermitian_from_params(const double* params, int d);
CMatrix hermitian_basis(int d, int p);

// exp(iH) for Hermitian H together with its Frechet derivative
//   L(E) = V (F o (V^dagger E V)) V^dagger,
//   F_ab = (e^{i w_a} - e^{i w_b}) / (w_a - w_b),  F_aa = i e^{i w_a},
// evaluated in the numerically stable form i e^{i(w_a+w_b)/2} sinc((w_a-w_b)/2).
class ExpiHermitian {
 public:
  explicit ExpiHermitian(const CMatrix& h);

  const CMatrix& value() const { return value_; }
  CMatrix derivative(const CMatrix& direction) const;

 private:
  CMatrix vecs_;
  CMatrix divided_;
  CMatrix value_;
};

// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
CMatrix haar_unitary(int d, Rng& rng);

// Closest unitary in Frobenius norm (polar factor).
CMatrix nearest_unitary(const CMatrix& m);

// Squared weighted-Gram residual of N unitaries as a least-squares problem.
//
// Member 0 is held fixed (gauge: with the left U(d) symmetry it can be taken
// to be the identity). Members 1..N-1 are bases[k] * exp(i H(x_k)) where x_k
// is the k-th block of d^2 parameters. Residuals are (Re, Im) of
// Tr(Lambda U_i^dagger U_j) for i < j, so ||r||^2 = sum_{i<j} |G_ij|^2.
class GramObjective final : public LeastSquaresProblem {
 public:
  GramObjective(const SchmidtVector& state, std::vector<CMatrix> bases);

  int num_params() const override { return free_ * d_ * d_; }
  int num_residuals() const override { return n_ * (n_ - 1); }

  void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r,
                Eigen::MatrixXd* jac) const override;

  // Folds x into the base unitaries and resets x to zero.
  void accept(Eigen::VectorXd& x) override;

  double value(const Eigen::VectorXd& x) const;
  // 2 J^T r
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  std::vector<CMatrix> unitaries(const Eigen::VectorXd& x) const;
  const std::vector<CMatrix>& bases() const { return bases_; }

 private:
  int d_;
  int n_;
  int free_;
  Eigen::VectorXd lambda_;
  std::vector<CMatrix> bases_;
  int accepted_ = 0;
};

}  // namespace densecode
