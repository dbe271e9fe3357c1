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

#include "densecode/qstate.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "densecode/errors.h"

namespace densecode {

SchmidtVector make_schmidt(std::span<const double> coeffs, int d) {
  if (d < 2) throw DimensionError(fmt::format("dimension must be >= 2, got {}", d));
  if (static_cast<int>(coeffs.size()) != d) {
    throw DimensionError(
        fmt::format("expected {} Schmidt coefficients, got {}", d, coeffs.size()));
  }
  std::vector<double> lambda(coeffs.begin(), coeffs.end());
  for (double& l : lambda) {
    if (!std::isfinite(l)) throw NegativeCoefficient("Schmidt coefficient is not finite");
    if (l < -kNegativeClampTol) {
      throw NegativeCoefficient(fmt::format("Schmidt coefficient {} is negative", l));
    }
    if (l < 0.0) l = 0.0;
  }
  const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    throw NormalizationError(
        fmt::format("Schmidt coefficients sum to {:.17g}, not 1", sum));
  }
  std::stable_sort(lambda.begin(), lambda.end(), std::greater<>());
  return SchmidtVector(std::move(lambda));
}

SchmidtVector uniform_state(int d) {
  if (d < 2) throw DimensionError(fmt::format("dimension must be >= 2, got {}", d));
  std::vector<double> l(static_cast<size_t>(d), 1.0 / d);
  return make_schmidt(l, d);
}

Unitary Unitary::from_matrix(CMatrix m, double tol) {
  Unitary u = unchecked(std::move(m));
  const double err = u.unitarity_error();
  if (!(err <= tol)) {
    throw NotUnitary(fmt::format("matrix deviates from unitarity by {:.3g}", err));
  }
  return u;
}

Unitary Unitary::unchecked(CMatrix m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError(fmt::format("unitary must be square, got {}x{}", m.rows(), m.cols()));
  }
  return Unitary(std::move(m));
}

Unitary Unitary::identity(int d) {
  if (d < 1) throw DimensionError("identity dimension must be positive");
  return Unitary(CMatrix::Identity(d, d));
}

double Unitary::unitarity_error() const {
  const CMatrix defect = m_.adjoint() * m_ - CMatrix::Identity(m_.rows(), m_.cols());
  return defect.cwiseAbs().maxCoeff();
}

Unitary operator*(const Unitary& a, const Unitary& b) {
  if (a.dim() != b.dim()) throw DimensionError("unitary product dimension mismatch");
  return Unitary(a.m_ * b.m_);
}

Complex weighted_inner(const SchmidtVector& state, const Unitary& u, const Unitary& v) {
  const int d = state.dim();
  if (u.dim() != d || v.dim() != d) {
    throw DimensionError(fmt::format("state has d={}, unitaries have d={} and d={}", d,
                                     u.dim(), v.dim()));
  }
  const CMatrix& a = u.matrix();
  const CMatrix& b = v.matrix();
  Complex acc = 0.0;
  for (int k = 0; k < d; ++k) {
    if (state[k] == 0.0) continue;
    acc += state[k] * a.col(k).dot(b.col(k));  // dot() conjugates the left operand
  }
  return acc;
}

namespace {

void check_members(const SchmidtVector& state, std::span<const Unitary> unitaries) {
  if (unitaries.empty()) throw EmptySet("operator set is empty");
  for (const Unitary& u : unitaries) {
    if (u.dim() != state.dim()) {
      throw DimensionError(
          fmt::format("member of dimension {} in a set for d={}", u.dim(), state.dim()));
    }
  }
}

}  // namespace

CMatrix gram_matrix(const SchmidtVector& state, std::span<const Unitary> unitaries) {
  check_members(state, unitaries);
  const auto n = static_cast<Eigen::Index>(unitaries.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = weighted_inner(state, unitaries[i], unitaries[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

double gram_residual(const SchmidtVector& state, std::span<const Unitary> unitaries) {
  check_members(state, unitaries);
  double worst = 0.0;
  for (size_t i = 0; i < unitaries.size(); ++i) {
    for (size_t j = i + 1; j < unitaries.size(); ++j) {
      worst = std::max(worst, std::abs(weighted_inner(state, unitaries[i], unitaries[j])));
    }
  }
  return worst;
}

bool is_orthogonal_set(const SchmidtVector& state, std::span<const Unitary> unitaries,
                       double tol) {
  if (!(tol > 0.0)) throw BadArguments("orthogonality tolerance must be positive");
  if (!(gram_residual(state, unitaries) <= tol)) return false;
  return std::all_of(unitaries.begin(), unitaries.end(),
                     [](const Unitary& u) { return u.is_unitary(); });
}

double entropy(const SchmidtVector& state, double log_base) {
  if (!(log_base > 1.0)) throw BadArguments("entropy log base must exceed 1");
  double s = 0.0;
  for (double l : state.lambda()) {
    if (l > 0.0) s -= l * std::log(l);
  }
  return s / std::log(log_base);
}

OperatorSet::OperatorSet(SchmidtVector state, std::vector<Unitary> unitaries)
    : state_(std::move(state)), unitaries_(std::move(unitaries)) {
  residual_ = gram_residual(state_, unitaries_);
}

bool OperatorSet::is_orthogonal(double tol) const {
  return is_orthogonal_set(state_, unitaries_, tol);
}

OperatorSet OperatorSet::prefix(int n) const {
  if (n < 1 || n > size()) {
    throw BadArguments(fmt::format("prefix length {} outside [1, {}]", n, size()));
  }
  return OperatorSet(state_, std::vector<Unitary>(unitaries_.begin(), unitaries_.begin() + n));
}

}  // namespace densecode
