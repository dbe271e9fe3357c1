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
#include <string>
#include <vector>

#include "densecode/config.h"
#include "densecode/qstate.h"

namespace densecode {

// Largest set the closed-form constructions give for a state: the shift set
// (d), a phase product set (k*d for the largest k with lambda0 <= 1/k) or the
// d+1 set when the state is psi_d.
struct AnalyticBound {
  OperatorSet set;
  std::string construction;  // "shift", "phase-product", "d-plus-1"
};

AnalyticBound analytic_lower_bound(const SchmidtVector& state, const SearchConfig& config);

struct FeasibilityResult {
  enum class Status { Feasible, NotFound };

  Status status = Status::NotFound;
  std::optional<OperatorSet> set;
  // Gram residual (max-abs off-diagonal) of the best candidate seen.
  double best_residual = 0.0;
  int restarts_used = 0;
  // "analytic:<construction>" or "optimizer".
  std::string route;

  bool feasible() const { return status == Status::Feasible; }
};

// Searches for N unitaries orthogonal on `state`, d <= N <= d^2.
//
// Sets covered by analytic_lower_bound are returned without optimizer work.
// Otherwise member 0 is the identity and the rest are bases * exp(iH),
// minimized by Levenberg-Marquardt over config.restarts starts (even starts
// are warm-started from the analytic set, odd ones are Haar random). The
// winner is the lowest-index successful restart, so the outcome does not
// depend on config.parallelism.
//
// NotFound is a one-sided certificate: no start reached ortho_tol. It is not
// a proof that no such set exists.
//
// Throws BadArguments.
FeasibilityResult feasible(const SchmidtVector& state, int n, const SearchConfig& config);

struct FrontierProbe {
  int n = 0;
  int restarts = 0;
  double best_residual = 0.0;
};

struct NMaxResult {
  int n_max = 0;
  OperatorSet set;
  int analytic_bound = 0;
  // Failed probes at n_max + 1: the regular budget and the doubled retry.
  std::vector<FrontierProbe> evidence;
};

// Ascends from the analytic bound until feasible() fails twice at the same N
// (second attempt with a fresh, doubled restart budget).
NMaxResult n_max(const SchmidtVector& state, const SearchConfig& config);

struct RegionCell {
  int i = 0;  // steps from (1/3, 1/3) towards (1/2, 1/2)
  int j = 0;  // steps from (1/3, 1/3) towards (1, 0)
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  int n_max = 0;
  // The n_max-member set that was found.
  std::optional<OperatorSet> witness;
};

// N_max over the ordered qutrit simplex lambda1 <= lambda0,
// lambda0 + lambda1 <= 1, lambda1 >= (1 - lambda0)/2: the triangle with
// corners (1/3,1/3), (1/2,1/2), (1,0), sampled on a triangular lattice with
// `resolution` steps per edge. Node (0, 0) is exactly the maximally
// entangled state. Values come from n_max and inherit its one-sided caveat.
struct RegionMap {
  int d = 3;
  int resolution = 0;
  std::vector<RegionCell> cells;
  SearchConfig config;
};

// Region-map lattice point (i, j), i + j <= resolution.
std::pair<double, double> region_point(int resolution, int i, int j);

RegionMap region_map(int resolution, const SearchConfig& config);

struct ThresholdResult {
  // Largest lambda0 on the two-coefficient family (lambda0, 1-lambda0, 0...)
  // at which a set of N was found; bracket [lo, hi] with hi - lo <= 1e-3.
  double lambda0 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::pair<double, bool>> prescan;
  int probes = 0;
  // N-member set found at lambda0.
  std::optional<OperatorSet> witness;
};

// Feasibility boundary for d < N <= 2d. A 16-point pre-scan on [1/2, 1)
// must show a down-set (feasible below, infeasible above); otherwise
// MonotonicityViolation is thrown. Each NotFound probe is retried once with
// a doubled restart budget.
//
// Throws BadArguments, MonotonicityViolation.
ThresholdResult find_min_lambda0(int n, int d, const SearchConfig& config);
double min_lambda0(int n, int d, const SearchConfig& config);

// Entropy (base d) of the threshold state from find_min_lambda0.
double min_entropy_for_N(int n, int d, const SearchConfig& config);

// max(0, log_d N - 1): entanglement floor from C <= 1 + S.
double capacity_lower_bound(int n, int d);

// Two-coefficient state (lambda0, 1 - lambda0, 0, ..., 0).
SchmidtVector two_coefficient_state(double lambda0, int d);

}  // namespace densecode
