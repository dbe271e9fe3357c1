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

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "densecode/config.h"
#include "densecode/qstate.h"

namespace densecode {

// X^m with X|k> = |k+1 mod d>.
Unitary shift(int d, int m);

// diag(exp(2 pi i k n / d)).
Unitary rotate(int d, int n);

// All d^2 products X^m Z^n on the uniform state, index m*d + n.
OperatorSet weyl_set(int d);

// {X^0, ..., X^{d-1}} on `state`; orthogonal for every state.
OperatorSet shift_set(const SchmidtVector& state);

// Phases theta(n, k) of N diagonal operators Z_n|k> = exp(i theta(n,k))|k>.
// Row 0 is the identity gauge and must be all zeros.
class PhaseTable {
 public:
  explicit PhaseTable(Eigen::MatrixXd theta);

  int count() const { return static_cast<int>(theta_.rows()); }
  int dim() const { return static_cast<int>(theta_.cols()); }
  const Eigen::MatrixXd& theta() const { return theta_; }

  Unitary phase_operator(int n) const;

 private:
  Eigen::MatrixXd theta_;
};

// sum_{m<n} |sum_i lambda_i exp(i (theta(m,i) - theta(n,i)))|^2
double phase_residual(const SchmidtVector& state, const PhaseTable& table);

struct PhaseSolveOptions {
  // When false the lambda0 <= 1/N early-out and the closed-form shortcuts are
  // skipped and only the numerical search runs (used to probe the condition).
  bool trust_gate = true;
};

struct PhaseSolution {
  enum class Route { Gate, Polygon, Grouping, Numeric };

  std::optional<PhaseTable> table;
  // Best phase_residual reached; +inf when rejected by the gate.
  double best_residual = 0.0;
  int restarts_used = 0;
  Route route = Route::Numeric;

  bool feasible() const { return table.has_value(); }
};

// N phase operators orthogonal on `state`, 2 <= N <= d. A table exists iff
// lambda0 <= 1/N; with the gate trusted, larger lambda0 is rejected without
// searching. Otherwise closed forms are tried first (polygon for N = 2, exact
// equal-weight grouping) and then multi-start Levenberg-Marquardt on the
// phases, accepting residual < ortho_tol^2.
//
// Throws BadArguments.
PhaseSolution solve_phase_table(const SchmidtVector& state, int n, const SearchConfig& config,
                                PhaseSolveOptions options = {});

// Closed-form phases with sum_i lambda_i exp(i theta_i) = 0: the largest
// weight sits at angle 0 and the rest are split greedily into two groups
// that close a triangle by the law of cosines. Angles lie in [0, 2 pi).
//
// Throws PolygonImpossible when lambda0 > 1/2.
std::vector<double> polygon_phases(const SchmidtVector& state);

// U_{mn} = X^m Z_n, index m*N + n, so N*d unitaries.
// Throws DimensionError, Infeasible (table not orthogonal on `state`).
OperatorSet product_set(const SchmidtVector& state, const PhaseTable& table);

// psi_d = ((d-1)/d, 1/d, 0, ..., 0).
SchmidtVector d_plus_1_state(int d);

// U_d^k: column 0 is -1/(d-1) e_0 + sqrt(d)/(d-1) sum_{j=1}^{d-2} w^{kj} e_{j+1}
// with w = exp(2 pi i/(d-1)), column 1 is e_1, the remaining columns are a
// deterministic Gram-Schmidt completion. Throws BadArguments for d < 3.
Unitary d_plus_1_rotation(int d, int k);

// {1, X, U_d^0, ..., U_d^{d-2}} on psi_d (d + 1 members). Throws BadArguments.
OperatorSet d_plus_1_set(int d);

// Treat each group of Schmidt indices as one level of an N-level maximally
// entangled state. Feasible iff every group sums to 1/N within 1e-9; members
// of group g get phases 2 pi g n / N. Indices left out must carry zero weight.
//
// Throws BadPartition.
std::optional<PhaseTable> grouped_phase_set(const SchmidtVector& state,
                                            const std::vector<std::vector<int>>& grouping);

// A partition of the nonzero-weight indices into N groups of weight 1/N each,
// if one exists (exhaustive; intended for small d).
std::optional<std::vector<std::vector<int>>> find_equal_partition(const SchmidtVector& state,
                                                                  int n, double tol = 1e-12);

}  // namespace densecode
