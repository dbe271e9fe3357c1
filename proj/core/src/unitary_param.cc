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

#include "densecode/unitary_param.h"

#include <cmath>

#include <fmt/format.h>

#include "densecode/errors.h"

namespace densecode {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Frobenius pairing <A, B> = sum conj(A_lk) B_lk.
Complex pair(const CMatrix& a, const CMatrix& b) {
  return (a.array().conjugate() * b.array()).sum();
}

}  // namespace

CMatrix hermitian_from_params(const double* params, int d) {
  CMatrix h(d, d);
  int p = 0;
  for (int a = 0; a < d; ++a) h(a, a) = params[p++];
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      h(a, b) = Complex(params[p], params[p + 1]);
      h(b, a) = Complex(params[p], -params[p + 1]);
      p += 2;
    }
  }
  return h;
}

CMatrix hermitian_basis(int d, int p) {
  std::vector<double> e(static_cast<size_t>(d * d), 0.0);
  e[static_cast<size_t>(p)] = 1.0;
  return hermitian_from_params(e.data(), d);
}

ExpiHermitian::ExpiHermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  vecs_ = eig.eigenvectors();
  const Eigen::VectorXd w = eig.eigenvalues();
  const Eigen::Index d = w.size();
  divided_.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double half = 0.5 * (w[a] - w[b]);
      divided_(a, b) = Complex(0.0, 1.0) * std::polar(1.0, 0.5 * (w[a] + w[b])) * sinc(half);
    }
  }
  Eigen::VectorXcd phases(d);
  for (Eigen::Index a = 0; a < d; ++a) phases[a] = std::polar(1.0, w[a]);
  value_ = vecs_ * phases.asDiagonal() * vecs_.adjoint();
}

CMatrix ExpiHermitian::derivative(const CMatrix& direction) const {
  const CMatrix rotated = vecs_.adjoint() * direction * vecs_;
  return vecs_ * divided_.cwiseProduct(rotated) * vecs_.adjoint();
}

CMatrix haar_unitary(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) z(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < d; ++c) {
    const Complex diag = rmat(c, c);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(c) *= diag / mag;
  }
  return q;
}

CMatrix nearest_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

GramObjective::GramObjective(const SchmidtVector& state, std::vector<CMatrix> bases)
    : d_(state.dim()),
      n_(static_cast<int>(bases.size())),
      free_(static_cast<int>(bases.size()) - 1),
      lambda_(Eigen::Map<const Eigen::VectorXd>(state.lambda().data(), state.dim())),
      bases_(std::move(bases)) {
  if (n_ < 2) throw BadArguments("gram objective needs at least two unitaries");
  for (const CMatrix& b : bases_) {
    if (b.rows() != d_ || b.cols() != d_) {
      throw DimensionError(fmt::format("base unitary is {}x{}, expected {}x{}", b.rows(),
                                       b.cols(), d_, d_));
    }
  }
}

std::vector<CMatrix> GramObjective::unitaries(const Eigen::VectorXd& x) const {
  std::vector<CMatrix> us(static_cast<size_t>(n_));
  us[0] = bases_[0];
  for (int k = 1; k < n_; ++k) {
    const CMatrix h = hermitian_from_params(x.data() + (k - 1) * d_ * d_, d_);
    us[k] = bases_[k] * ExpiHermitian(h).value();
  }
  return us;
}

void GramObjective::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r,
                             Eigen::MatrixXd* jac) const {
  const int block = d_ * d_;
  std::vector<CMatrix> us(static_cast<size_t>(n_));
  // du[k][p] = d U_k / d x_{k,p}
  std::vector<std::vector<CMatrix>> du(jac != nullptr ? n_ : 0);
  us[0] = bases_[0];
  for (int k = 1; k < n_; ++k) {
    const CMatrix h = hermitian_from_params(x.data() + (k - 1) * block, d_);
    const ExpiHermitian e(h);
    us[k] = bases_[k] * e.value();
    if (jac != nullptr) {
      du[k].resize(static_cast<size_t>(block));
      for (int p = 0; p < block; ++p) {
        du[k][p] = bases_[k] * e.derivative(hermitian_basis(d_, p));
      }
    }
  }
  // Tr(Lambda A^dagger B) = <A Lambda, B>
  std::vector<CMatrix> weighted(static_cast<size_t>(n_));
  for (int k = 0; k < n_; ++k) weighted[k] = us[k] * lambda_.asDiagonal();

  r.resize(num_residuals());
  if (jac != nullptr) jac->setZero(num_residuals(), num_params());
  int row = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j, row += 2) {
      const Complex g = pair(weighted[i], us[j]);
      r[row] = g.real();
      r[row + 1] = g.imag();
      if (jac == nullptr) continue;
      for (int p = 0; p < block; ++p) {
        const Complex dj = pair(weighted[i], du[j][p]);
        (*jac)(row, (j - 1) * block + p) = dj.real();
        (*jac)(row + 1, (j - 1) * block + p) = dj.imag();
        if (i > 0) {
          const Complex di = std::conj(pair(weighted[j], du[i][p]));
          (*jac)(row, (i - 1) * block + p) = di.real();
          (*jac)(row + 1, (i - 1) * block + p) = di.imag();
        }
      }
    }
  }
}

void GramObjective::accept(Eigen::VectorXd& x) {
  std::vector<CMatrix> us = unitaries(x);
  ++accepted_;
  const bool reproject = accepted_ % 50 == 0;
  for (int k = 1; k < n_; ++k) bases_[k] = reproject ? nearest_unitary(us[k]) : us[k];
  x.setZero();
}

double GramObjective::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r(num_residuals());
  evaluate(x, r, nullptr);
  return r.squaredNorm();
}

Eigen::VectorXd GramObjective::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r(num_residuals());
  Eigen::MatrixXd jac(num_residuals(), num_params());
  evaluate(x, r, &jac);
  return 2.0 * jac.transpose() * r;
}

}  // namespace densecode
