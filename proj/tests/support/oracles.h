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

// Reference computations used only by tests. They are written from the
// definitions with explicit loops and long double accumulation and share no
// code with the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace densecode::oracle {

using LComplex = std::complex<long double>;
using Matrix = Eigen::MatrixXcd;

inline long double pi() { return std::numbers::pi_v<long double>; }

// sum_ij Lambda_ii conj(U_ji) V_ji, i.e. Tr(Lambda U^dagger V) by definition.
inline std::complex<double> weighted_trace(const std::vector<double>& lambda, const Matrix& u,
                                           const Matrix& v) {
  LComplex acc = 0;
  const auto d = static_cast<Eigen::Index>(lambda.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const LComplex a(u(j, i).real(), -u(j, i).imag());
      const LComplex b(v(j, i).real(), v(j, i).imag());
      acc += static_cast<long double>(lambda[static_cast<size_t>(i)]) * a * b;
    }
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

inline double max_offdiag(const std::vector<double>& lambda, const std::vector<Matrix>& set) {
  double worst = 0.0;
  for (size_t i = 0; i < set.size(); ++i) {
    for (size_t j = 0; j < set.size(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(weighted_trace(lambda, set[i], set[j])));
    }
  }
  return worst;
}

inline double entropy(const std::vector<long double>& lambda, long double base) {
  long double s = 0;
  for (long double l : lambda) {
    if (l > 0) s -= l * std::log(l);
  }
  return static_cast<double>(s / std::log(base));
}

// X|j> = |j + m mod d>
inline Matrix shift(int d, int m) {
  Matrix x = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x(((j + m) % d + d) % d, j) = 1.0;
  return x;
}

// Z|j> = w^{nj}|j>
inline Matrix rotate(int d, int n) {
  Matrix z = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const long double a = 2 * pi() * static_cast<long double>((n * j) % d) / d;
    z(j, j) = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
  }
  return z;
}

// The qutrit rotation by 2 pi / 3 in the span of |0> and |2>.
inline Matrix qutrit_rotation() {
  const double h = std::sqrt(3.0) / 2.0;
  Matrix u(3, 3);
  u << -0.5, 0, -h,  //
      0, 1, 0,       //
      h, 0, -0.5;
  return u;
}

// Bell vectors over |ab> at index 2a + b:
// (|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>), all over sqrt 2.
inline std::vector<Eigen::VectorXcd> bell_vectors() {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::VectorXcd> v(4, Eigen::VectorXcd::Zero(4));
  v[0] << r, 0, 0, r;
  v[1] << r, 0, 0, -r;
  v[2] << 0, r, r, 0;
  v[3] << 0, r, -r, 0;
  return v;
}

// |<a|b>| for unit vectors; 1 means equal up to global phase.
inline double overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(a.dot(b));
}

// Reference minimal-entanglement thresholds: the largest lambda0 on the
// two-coefficient family that still admits N unitaries in dimension d.
inline double table_threshold(int n, int d) {
  static const std::vector<std::vector<double>> kTable = {
      // d = 3: N = 4, 5, 6
      {2.0 / 3.0, 3.0 / 5.0, 1.0 / 2.0},
      // d = 4: N = 5, 6, 7, 8
      {3.0 / 4.0, 2.0 / 3.0, 4.0 / 7.0, 1.0 / 2.0}};
  return kTable[static_cast<size_t>(d - 3)][static_cast<size_t>(n - d - 1)];
}

// sum_k lambda_k exp(i theta_k)
inline std::complex<double> phase_sum(const std::vector<double>& lambda,
                                      const std::vector<double>& theta) {
  LComplex s = 0;
  for (size_t k = 0; k < lambda.size(); ++k) {
    s += static_cast<long double>(lambda[k]) *
         LComplex(std::cos(static_cast<long double>(theta[k])),
                  std::sin(static_cast<long double>(theta[k])));
  }
  return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

}  // namespace densecode::oracle
