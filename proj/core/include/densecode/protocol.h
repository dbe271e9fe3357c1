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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "densecode/qstate.h"

namespace densecode {

// Two-qudit pure state, amplitude of |a>_A |b>_B at index a*d + b.
class BipartiteVector {
 public:
  // Throws DimensionError, NormalizationError (|norm^2 - 1| > 1e-12).
  BipartiteVector(int d, Eigen::VectorXcd amplitudes);

  int dim() const { return d_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex at(int alice, int bob) const { return amplitudes_[alice * d_ + bob]; }

  // <this|other>
  Complex inner(const BipartiteVector& other) const;

 private:
  int d_;
  Eigen::VectorXcd amplitudes_;
};

// sum_i sqrt(lambda_i) |i>|i>
BipartiteVector schmidt_state(const SchmidtVector& state);

// (U_letter x 1)|psi>. Throws LetterOutOfRange.
BipartiteVector encode(const OperatorSet& set, int letter);

// The N encoded states, in letter order.
std::vector<BipartiteVector> measurement_basis(const OperatorSet& set);

struct Decoded {
  static constexpr int kErasure = -1;

  int letter = kErasure;
  double probability = 0.0;
};

// Projective measurement on the span of `basis`. The measurement vectors are
// the symmetric (Loewdin) orthonormalization of the basis, which is the
// basis itself when it is orthonormal. The outcome is the most likely
// letter (lowest index on ties); when the weight outside the span beats
// every letter the outcome is an erasure.
//
// Throws DegenerateBasis (empty, mixed dimensions or linearly dependent).
Decoded decode(const BipartiteVector& received, std::span<const BipartiteVector> basis);

// Born probabilities of every letter followed by the out-of-span weight.
std::vector<double> outcome_probabilities(const BipartiteVector& received,
                                          std::span<const BipartiteVector> basis);

struct SimulationReport {
  std::vector<int> message;
  std::vector<int> decoded;
  // Probability that the sent letter is the measurement outcome.
  std::vector<double> success_probability;
  // Per-letter outcome counts (letters then erasure) when shots > 0.
  std::vector<std::vector<int>> shot_counts;
  double dits_per_use = 0.0;
  int shots = 0;

  bool perfect(double tol = 1e-9) const;
};

// Encodes and decodes every letter of `message`. With shots > 0 each letter
// is measured `shots` times by sampling the Born distribution (stream
// derived from `seed`) and decoded by majority; otherwise decoding is the
// exact argmax.
//
// Throws LetterOutOfRange, DegenerateBasis.
SimulationReport simulate(const OperatorSet& set, std::span<const int> message,
                          std::uint64_t seed, int shots = 0);

}  // namespace densecode
