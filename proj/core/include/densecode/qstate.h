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

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace densecode {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kOrthogonalityTol = 1e-9;
inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kNegativeClampTol = 1e-12;

// Schmidt coefficients of a bipartite pure state, sorted descending and
// summing to one. All downstream math depends on the state only through
// this vector (as the diagonal weight matrix Lambda).
class SchmidtVector {
 public:
  int dim() const { return static_cast<int>(lambda_.size()); }
  const std::vector<double>& lambda() const { return lambda_; }
  double operator[](int i) const { return lambda_[static_cast<size_t>(i)]; }
  double largest() const { return lambda_.front(); }

  bool operator==(const SchmidtVector&) const = default;

 private:
  friend SchmidtVector make_schmidt(std::span<const double> coeffs, int d);
  explicit SchmidtVector(std::vector<double> lambda) : lambda_(std::move(lambda)) {}

  std::vector<double> lambda_;
};

// Validating constructor. Entries in [-1e-12, 0) are clamped to zero and the
// result is stably sorted descending. The sum is checked, not renormalized.
//
// Throws DimensionError, NegativeCoefficient, NormalizationError.
SchmidtVector make_schmidt(std::span<const double> coeffs, int d);
inline SchmidtVector make_schmidt(std::initializer_list<double> coeffs, int d) {
  return make_schmidt(std::span<const double>(coeffs.begin(), coeffs.size()), d);
}

SchmidtVector uniform_state(int d);

// A d x d complex matrix intended to be unitary. The checked factory
// enforces U^dagger U = 1; `unchecked` exists for inputs read from files,
// which are judged by is_orthogonal_set instead of being rejected.
class Unitary {
 public:
  static Unitary from_matrix(CMatrix m, double tol = kUnitarityTol);
  static Unitary unchecked(CMatrix m);
  static Unitary identity(int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

  // max_ij |(U^dagger U - 1)_ij|
  double unitarity_error() const;
  bool is_unitary(double tol = kUnitarityTol) const { return unitarity_error() <= tol; }

  Unitary adjoint() const { return Unitary(m_.adjoint()); }
  friend Unitary operator*(const Unitary& a, const Unitary& b);

 private:
  explicit Unitary(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

// Tr(Lambda U^dagger V) = sum_k lambda_k (U^dagger V)_kk.
Complex weighted_inner(const SchmidtVector& state, const Unitary& u, const Unitary& v);

// Full N x N matrix of weighted inner products.
CMatrix gram_matrix(const SchmidtVector& state, std::span<const Unitary> unitaries);

// max_{i<j} |Tr(Lambda U_i^dagger U_j)|; zero for a singleton.
// Throws EmptySet, DimensionError.
double gram_residual(const SchmidtVector& state, std::span<const Unitary> unitaries);

bool is_orthogonal_set(const SchmidtVector& state, std::span<const Unitary> unitaries,
                       double tol = kOrthogonalityTol);

// -sum lambda_i log(lambda_i) / log(base), with 0 log 0 = 0.
double entropy(const SchmidtVector& state, double log_base);

// A candidate dense-coding alphabet: unitaries together with the state they
// are meant to be orthogonal against. The residual is always recomputed.
class OperatorSet {
 public:
  OperatorSet(SchmidtVector state, std::vector<Unitary> unitaries);

  const SchmidtVector& state() const { return state_; }
  const std::vector<Unitary>& unitaries() const { return unitaries_; }
  int size() const { return static_cast<int>(unitaries_.size()); }
  int dim() const { return state_.dim(); }
  double residual() const { return residual_; }

  CMatrix gram() const { return gram_matrix(state_, unitaries_); }
  bool is_orthogonal(double tol = kOrthogonalityTol) const;

  // First `n` members as a new set.
  OperatorSet prefix(int n) const;

 private:
  SchmidtVector state_;
  std::vector<Unitary> unitaries_;
  double residual_;
};

}  // namespace densecode
