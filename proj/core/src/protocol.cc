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

#include "densecode/protocol.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "densecode/config.h"
#include "densecode/errors.h"

namespace densecode {

namespace {

constexpr double kTieTol = 1e-12;

// Measurement vectors as columns: B (B^dagger B)^{-1/2}.
Eigen::MatrixXcd measurement_vectors(std::span<const BipartiteVector> basis) {
  if (basis.empty()) throw DegenerateBasis("measurement basis is empty");
  const int d = basis.front().dim();
  const auto dim = static_cast<Eigen::Index>(d) * d;
  Eigen::MatrixXcd b(dim, static_cast<Eigen::Index>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    if (basis[j].dim() != d) throw DegenerateBasis("basis vectors have mixed dimensions");
    b.col(static_cast<Eigen::Index>(j)) = basis[j].amplitudes();
  }
  if (b.cols() > dim) {
    throw DegenerateBasis(fmt::format("{} vectors cannot be independent in dimension {}",
                                      b.cols(), dim));
  }
  const Eigen::MatrixXcd gram = b.adjoint() * b;
  if ((gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <=
      1e-14) {
    return b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  const Eigen::VectorXd w = eig.eigenvalues();
  if (w.minCoeff() < 1e-10) {
    throw DegenerateBasis(
        fmt::format("basis is linearly dependent (smallest Gram eigenvalue {:.3g})", w.minCoeff()));
  }
  const Eigen::MatrixXcd inv_sqrt =
      eig.eigenvectors() * w.cwiseInverse().cwiseSqrt().asDiagonal() *
      eig.eigenvectors().adjoint();
  return b * inv_sqrt;
}

}  // namespace

BipartiteVector::BipartiteVector(int d, Eigen::VectorXcd amplitudes)
    : d_(d), amplitudes_(std::move(amplitudes)) {
  if (d < 1 || amplitudes_.size() != static_cast<Eigen::Index>(d) * d) {
    throw DimensionError(
        fmt::format("bipartite vector for d={} needs {} amplitudes", d, d * d));
  }
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-12) {
    throw NormalizationError(fmt::format("bipartite vector has squared norm {:.17g}", n2));
  }
}

Complex BipartiteVector::inner(const BipartiteVector& other) const {
  if (other.d_ != d_) throw DimensionError("bipartite vectors of different dimension");
  return amplitudes_.dot(other.amplitudes_);
}

BipartiteVector schmidt_state(const SchmidtVector& state) {
  const int d = state.dim();
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) amp[i * d + i] = std::sqrt(state[i]);
  return BipartiteVector(d, std::move(amp));
}

BipartiteVector encode(const OperatorSet& set, int letter) {
  if (letter < 0 || letter >= set.size()) {
    throw LetterOutOfRange(fmt::format("letter {} outside [0, {})", letter, set.size()));
  }
  const int d = set.dim();
  const CMatrix& u = set.unitaries()[static_cast<size_t>(letter)].matrix();
  Eigen::VectorXcd amp(static_cast<Eigen::Index>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) amp[a * d + b] = u(a, b) * std::sqrt(set.state()[b]);
  }
  return BipartiteVector(d, std::move(amp));
}

std::vector<BipartiteVector> measurement_basis(const OperatorSet& set) {
  std::vector<BipartiteVector> basis;
  basis.reserve(static_cast<size_t>(set.size()));
  for (int k = 0; k < set.size(); ++k) basis.push_back(encode(set, k));
  return basis;
}

std::vector<double> outcome_probabilities(const BipartiteVector& received,
                                          std::span<const BipartiteVector> basis) {
  const Eigen::MatrixXcd m = measurement_vectors(basis);
  if (received.amplitudes().size() != m.rows()) {
    throw DimensionError("received state and basis have different dimensions");
  }
  const Eigen::VectorXcd amp = m.adjoint() * received.amplitudes();
  std::vector<double> p(static_cast<size_t>(amp.size()) + 1);
  double captured = 0.0;
  for (Eigen::Index j = 0; j < amp.size(); ++j) {
    p[static_cast<size_t>(j)] = std::norm(amp[j]);
    captured += p[static_cast<size_t>(j)];
  }
  p.back() = std::max(0.0, 1.0 - captured);
  return p;
}

Decoded decode(const BipartiteVector& received, std::span<const BipartiteVector> basis) {
  const std::vector<double> p = outcome_probabilities(received, basis);
  Decoded out{0, p[0]};
  for (size_t j = 1; j + 1 < p.size(); ++j) {
    if (p[j] > out.probability + kTieTol) out = {static_cast<int>(j), p[j]};
  }
  if (p.back() > out.probability + kTieTol) out = {Decoded::kErasure, p.back()};
  return out;
}

bool SimulationReport::perfect(double tol) const {
  if (decoded != message) return false;
  return std::all_of(success_probability.begin(), success_probability.end(),
                     [&](double p) { return p >= 1.0 - tol; });
}

SimulationReport simulate(const OperatorSet& set, std::span<const int> message,
                          std::uint64_t seed, int shots) {
  if (shots < 0) throw BadArguments("shots must be non-negative");
  SimulationReport report;
  report.message.assign(message.begin(), message.end());
  report.shots = shots;
  report.dits_per_use = std::log(static_cast<double>(set.size())) / std::log(set.dim());
  const std::vector<BipartiteVector> basis = measurement_basis(set);

  for (size_t pos = 0; pos < message.size(); ++pos) {
    const BipartiteVector received = encode(set, message[pos]);
    const std::vector<double> p = outcome_probabilities(received, basis);
    report.success_probability.push_back(p[static_cast<size_t>(message[pos])]);
    if (shots == 0) {
      report.decoded.push_back(decode(received, basis).letter);
      continue;
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(pos)}));
    std::discrete_distribution<int> outcome(p.begin(), p.end());
    std::vector<int> counts(p.size(), 0);
    for (int s = 0; s < shots; ++s) ++counts[static_cast<size_t>(outcome(rng))];
    const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
    report.decoded.push_back(best + 1 == static_cast<long>(counts.size())
                                 ? Decoded::kErasure
                                 : static_cast<int>(best));
    report.shot_counts.push_back(std::move(counts));
  }
  return report;
}

}  // namespace densecode
