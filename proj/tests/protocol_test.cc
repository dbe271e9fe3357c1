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

#include <cmath>

#include <gtest/gtest.h>

#include "densecode/constructions.h"
#include "densecode/errors.h"
#include "support/oracles.h"

namespace densecode {
namespace {

OperatorSet qutrit_four() {
  const Unitary u = Unitary::from_matrix(oracle::qutrit_rotation());
  return OperatorSet(make_schmidt({2.0 / 3, 1.0 / 3, 0.0}, 3),
                     {Unitary::identity(3), shift(3, 1), u, u.adjoint()});
}

TEST(BipartiteVector, ValidatesShapeAndNorm) {
  EXPECT_THROW(BipartiteVector(2, Eigen::VectorXcd::Zero(3)), DimensionError);
  EXPECT_THROW(BipartiteVector(2, Eigen::VectorXcd::Ones(4)), NormalizationError);
}

TEST(Encode, IdentityGivesSchmidtForm) {
  const SchmidtVector s = make_schmidt({0.5, 0.3, 0.2}, 3);
  const BipartiteVector v = encode(shift_set(s), 0);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double want = a == b ? std::sqrt(s[a]) : 0.0;
      EXPECT_NEAR(std::abs(v.at(a, b) - want), 0.0, 1e-15);
    }
  }
  EXPECT_NEAR(std::abs(v.inner(schmidt_state(s)) - 1.0), 0.0, 1e-15);
}

TEST(Encode, ShiftOnBellStateIsOddBellVector) {
  const OperatorSet w = weyl_set(2);
  const BipartiteVector v = encode(w, 1 * 2 + 0);
  EXPECT_NEAR(oracle::overlap(v.amplitudes(), oracle::bell_vectors()[2]), 1.0, 1e-15);
}

TEST(Encode, QutritRotationAmplitude) {
  const BipartiteVector v = encode(qutrit_four(), 2);
  EXPECT_NEAR(std::abs(v.at(2, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Encode, RejectsLetterOutOfRange) {
  EXPECT_THROW(encode(weyl_set(2), 4), LetterOutOfRange);
  EXPECT_THROW(encode(weyl_set(2), -1), LetterOutOfRange);
}

TEST(MeasurementBasis, BellBasisUpToPhase) {
  const auto basis = measurement_basis(weyl_set(2));
  const auto bell = oracle::bell_vectors();
  ASSERT_EQ(basis.size(), 4u);
  for (const BipartiteVector& v : basis) {
    double best = 0.0;
    for (const auto& b : bell) best = std::max(best, oracle::overlap(v.amplitudes(), b));
    EXPECT_NEAR(best, 1.0, 1e-12);
  }
}

TEST(MeasurementBasis, QutritFourIsOrthonormal) {
  const auto basis = measurement_basis(qutrit_four());
  for (size_t i = 0; i < basis.size(); ++i) {
    for (size_t j = 0; j < basis.size(); ++j) {
      EXPECT_NEAR(std::abs(basis[i].inner(basis[j])), i == j ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(MeasurementBasis, SingletonIsTheState) {
  const SchmidtVector s = make_schmidt({0.6, 0.4}, 2);
  const auto basis = measurement_basis(OperatorSet(s, {Unitary::identity(2)}));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0].amplitudes(), schmidt_state(s).amplitudes());
}

// The overlap of encoded states is the weighted trace of the operators.
TEST(MeasurementBasis, GramEqualsWeightedGram) {
  Rng rng(8);
  const SchmidtVector s = make_schmidt({0.45, 0.35, 0.2}, 3);
  std::vector<Unitary> set;
  for (int k = 0; k < 5; ++k) {
    std::normal_distribution<double> g;
    CMatrix m(3, 3);
    for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = Complex(g(rng), g(rng));
    set.push_back(Unitary::from_matrix(Eigen::HouseholderQR<CMatrix>(m).householderQ()));
  }
  const OperatorSet os(s, set);
  const auto basis = measurement_basis(os);
  const CMatrix g = os.gram();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      EXPECT_LT(std::abs(basis[i].inner(basis[j]) - g(i, j)), 1e-12);
    }
  }
}

TEST(Decode, ExactLetterAndTieBreak) {
  const auto basis = measurement_basis(weyl_set(2));
  const Decoded exact = decode(basis[2], basis);
  EXPECT_EQ(exact.letter, 2);
  EXPECT_NEAR(exact.probability, 1.0, 1e-15);

  const Eigen::VectorXcd mix = (basis[0].amplitudes() + basis[1].amplitudes()) / std::sqrt(2.0);
  const Decoded tie = decode(BipartiteVector(2, mix), basis);
  EXPECT_EQ(tie.letter, 0);
  EXPECT_NEAR(tie.probability, 0.5, 1e-15);
}

TEST(Decode, OutOfSpanWeightIsErasure) {
  const SchmidtVector s = uniform_state(2);
  const auto basis = measurement_basis(OperatorSet(s, {Unitary::identity(2)}));
  const Decoded d = decode(encode(weyl_set(2), 3), basis);
  EXPECT_EQ(d.letter, Decoded::kErasure);
  EXPECT_NEAR(d.probability, 1.0, 1e-15);
}

TEST(Decode, DependentBasisIsDegenerate) {
  const auto basis = measurement_basis(weyl_set(2));
  const std::vector<BipartiteVector> dup{basis[0], basis[0]};
  EXPECT_THROW(decode(basis[0], dup), DegenerateBasis);
  EXPECT_THROW(decode(basis[0], std::vector<BipartiteVector>{}), DegenerateBasis);
}

TEST(OutcomeProbabilities, SumToOne) {
  const auto basis = measurement_basis(OperatorSet(make_schmidt({0.7, 0.3}, 2), weyl_set(2).unitaries()));
  const auto p = outcome_probabilities(basis[1], basis);
  double sum = 0.0;
  for (double x : p) sum += x;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_LT(p[1], 1.0 - 1e-3);
}

TEST(Simulate, QutritFourRoundTrip) {
  const std::vector<int> message{0, 1, 2, 3, 2, 1};
  const SimulationReport r = simulate(qutrit_four(), message, 1);
  EXPECT_EQ(r.decoded, message);
  EXPECT_TRUE(r.perfect());
  EXPECT_NEAR(r.dits_per_use, std::log(4.0) / std::log(3.0), 1e-15);
  EXPECT_NEAR(r.dits_per_use, 1.262, 5e-4);
}

TEST(Simulate, SuperdenseQubits) {
  const std::vector<int> message{0, 1, 2, 3};
  const SimulationReport r = simulate(weyl_set(2), message, 1);
  EXPECT_TRUE(r.perfect());
  EXPECT_EQ(r.dits_per_use, 2.0);
}

TEST(Simulate, ProductStateShiftSetIsOneDit) {
  const SchmidtVector s = make_schmidt({1.0, 0.0, 0.0, 0.0}, 4);
  const std::vector<int> message{3, 0, 2};
  const SimulationReport r = simulate(shift_set(s), message, 1);
  EXPECT_TRUE(r.perfect());
  EXPECT_NEAR(r.dits_per_use, 1.0, 1e-15);
}

TEST(Simulate, ShotsAreSeededAndMajorityDecoded) {
  const OperatorSet noisy(make_schmidt({0.7, 0.3}, 2), weyl_set(2).unitaries());
  const std::vector<int> message{0, 1, 2, 3};
  const SimulationReport a = simulate(noisy, message, 42, 200);
  const SimulationReport b = simulate(noisy, message, 42, 200);
  EXPECT_EQ(a.shot_counts, b.shot_counts);
  EXPECT_EQ(a.decoded, message);
  EXPECT_FALSE(a.perfect());
  for (const auto& c : a.shot_counts) {
    int total = 0;
    for (int x : c) total += x;
    EXPECT_EQ(total, 200);
  }
}

}  // namespace
}  // namespace densecode
