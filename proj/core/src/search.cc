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

#include "densecode/search.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "densecode/constructions.h"
#include "densecode/errors.h"
#include "densecode/levenberg_marquardt.h"
#include "densecode/unitary_param.h"
#include "parallel.h"

namespace densecode {

namespace {

constexpr std::uint64_t kFeasibleStream = 0x66656173ULL;   // "feas"
constexpr std::uint64_t kFrontierStream = 0x66726f6eULL;   // "fron"
constexpr std::uint64_t kCellStream = 0x63656c6cULL;       // "cell"
constexpr std::uint64_t kThresholdStream = 0x74687265ULL;  // "thre"

bool is_d_plus_1_state(const SchmidtVector& state) {
  const int d = state.dim();
  if (d < 3) return false;
  if (std::abs(state[0] - static_cast<double>(d - 1) / d) > 1e-12) return false;
  if (std::abs(state[1] - 1.0 / d) > 1e-12) return false;
  for (int i = 2; i < d; ++i) {
    if (state[i] > 1e-12) return false;
  }
  return true;
}

struct RestartOutcome {
  bool ok = false;
  double residual = std::numeric_limits<double>::infinity();
  std::optional<OperatorSet> set;
};

RestartOutcome run_restart(const SchmidtVector& state, int n, const OperatorSet& warm,
                           const SearchConfig& config, std::uint64_t stream, int restart) {
  const int d = state.dim();
  Rng rng(derive_seed(config.seed, {stream, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(restart)}));
  std::vector<CMatrix> bases;
  bases.reserve(static_cast<size_t>(n));
  bases.push_back(CMatrix::Identity(d, d));
  // Even restarts keep the known orthogonal members (member 0 of every
  // construction is the identity) and only randomize the new ones.
  const int warm_count = restart % 2 == 0 ? std::min(n, warm.size()) : 1;
  for (int k = 1; k < n; ++k) {
    bases.push_back(k < warm_count ? warm.unitaries()[k].matrix() : haar_unitary(d, rng));
  }

  GramObjective objective(state, std::move(bases));
  LmOptions lm;
  lm.max_iterations = config.max_iterations;
  lm.target_cost = 0.01 * config.ortho_tol * config.ortho_tol;
  lm.initial_damping = config.initial_damping;
  lm.stall_window = config.stall_window;
  lm.stall_ratio = config.stall_ratio;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(objective.num_params());
  levenberg_marquardt(objective, x, lm);

  std::vector<Unitary> members;
  members.reserve(static_cast<size_t>(n));
  members.push_back(Unitary::identity(d));
  const std::vector<CMatrix> found = objective.unitaries(x);
  for (int k = 1; k < n; ++k) members.push_back(Unitary::unchecked(nearest_unitary(found[k])));

  RestartOutcome out;
  OperatorSet set(state, std::move(members));
  out.residual = set.residual();
  out.ok = set.is_orthogonal(config.ortho_tol);
  out.set.emplace(std::move(set));
  return out;
}

// Restarts [begin, begin + count) in chunks of config.parallelism; the
// lowest-index success wins.
FeasibilityResult run_restarts(const SchmidtVector& state, int n, const OperatorSet& warm,
                               const SearchConfig& config, std::uint64_t stream, int begin,
                               int count) {
  FeasibilityResult result;
  result.route = "optimizer";
  result.best_residual = std::numeric_limits<double>::infinity();
  const int chunk = std::max(1, config.parallelism);
  for (int start = 0; start < count; start += chunk) {
    const int len = std::min(chunk, count - start);
    std::vector<RestartOutcome> outcomes(static_cast<size_t>(len));
    internal::parallel_for(len, config.parallelism, [&](int i) {
      outcomes[i] = run_restart(state, n, warm, config, stream, begin + start + i);
    });
    for (int i = 0; i < len; ++i) {
      result.best_residual = std::min(result.best_residual, outcomes[i].residual);
      if (outcomes[i].ok) {
        result.status = FeasibilityResult::Status::Feasible;
        result.set = std::move(outcomes[i].set);
        result.best_residual = result.set->residual();
        result.restarts_used = start + i + 1;
        return result;
      }
    }
    result.restarts_used = start + len;
  }
  return result;
}

void check_n_range(const SchmidtVector& state, int n) {
  const int d = state.dim();
  if (n < d || n > d * d) {
    throw BadArguments(fmt::format("N={} outside [d, d^2] = [{}, {}]", n, d, d * d));
  }
}

FeasibilityResult analytic_result(const AnalyticBound& bound, int n) {
  FeasibilityResult result;
  result.status = FeasibilityResult::Status::Feasible;
  result.set = bound.set.prefix(n);
  result.best_residual = result.set->residual();
  result.route = "analytic:" + bound.construction;
  return result;
}

// feasible() with the frontier rule: a NotFound is retried once on a fresh
// block of 2 * restarts indices.
FeasibilityResult probe_with_retry(const SchmidtVector& state, int n, const OperatorSet& warm,
                                   const SearchConfig& config,
                                   std::vector<FrontierProbe>* evidence) {
  FeasibilityResult first =
      run_restarts(state, n, warm, config, kFeasibleStream, 0, config.restarts);
  if (first.feasible()) return first;
  FeasibilityResult second = run_restarts(state, n, warm, config, kFrontierStream,
                                          config.restarts, 2 * config.restarts);
  if (evidence != nullptr && !second.feasible()) {
    evidence->push_back({n, config.restarts, first.best_residual});
    evidence->push_back({n, 2 * config.restarts, second.best_residual});
  }
  second.best_residual = std::min(second.best_residual, first.best_residual);
  second.restarts_used += first.restarts_used;
  return second;
}

}  // namespace

void SearchConfig::validate() const {
  if (restarts < 1) throw BadArguments("restarts must be >= 1");
  if (max_iterations < 1) throw BadArguments("max_iterations must be >= 1");
  if (!(ortho_tol > 0.0)) throw BadArguments("ortho_tol must be positive");
  if (!(initial_damping > 0.0)) throw BadArguments("initial_damping must be positive");
  if (stall_window < 1) throw BadArguments("stall_window must be >= 1");
  if (!(stall_ratio >= 0.0)) throw BadArguments("stall_ratio must be non-negative");
  if (parallelism < 1) throw BadArguments("parallelism must be >= 1");
}

AnalyticBound analytic_lower_bound(const SchmidtVector& state, const SearchConfig& config) {
  const int d = state.dim();
  AnalyticBound best{shift_set(state), "shift"};
  for (int k = d; k >= 2; --k) {
    if (state.largest() > 1.0 / k + 1e-12) continue;
    const PhaseSolution sol = solve_phase_table(state, k, config);
    if (!sol.feasible()) continue;
    try {
      OperatorSet set = product_set(state, *sol.table);
      if (set.size() > best.set.size()) best = {std::move(set), "phase-product"};
      break;
    } catch (const Infeasible&) {
      continue;
    }
  }
  if (is_d_plus_1_state(state) && d + 1 > best.set.size()) {
    const OperatorSet reference = d_plus_1_set(d);
    best = {OperatorSet(state, reference.unitaries()), "d-plus-1"};
  }
  return best;
}

FeasibilityResult feasible(const SchmidtVector& state, int n, const SearchConfig& config) {
  config.validate();
  check_n_range(state, n);
  const AnalyticBound bound = analytic_lower_bound(state, config);
  if (n <= bound.set.size()) return analytic_result(bound, n);
  return run_restarts(state, n, bound.set, config, kFeasibleStream, 0, config.restarts);
}

NMaxResult n_max(const SchmidtVector& state, const SearchConfig& config) {
  config.validate();
  const int d = state.dim();
  const AnalyticBound bound = analytic_lower_bound(state, config);
  NMaxResult out{bound.set.size(), bound.set, bound.set.size(), {}};
  while (out.n_max < d * d) {
    FeasibilityResult next =
        probe_with_retry(state, out.n_max + 1, out.set, config, &out.evidence);
    if (!next.feasible()) break;
    out.set = std::move(*next.set);
    out.n_max = out.set.size();
  }
  return out;
}

std::pair<double, double> region_point(int resolution, int i, int j) {
  const double r6 = 6.0 * resolution;
  return {(2.0 * resolution + i + 4.0 * j) / r6, (2.0 * resolution + i - 2.0 * j) / r6};
}

RegionMap region_map(int resolution, const SearchConfig& config) {
  config.validate();
  if (resolution < 8) throw BadArguments(fmt::format("resolution {} < 8", resolution));
  RegionMap map;
  map.resolution = resolution;
  map.config = config;
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; i + j <= resolution; ++j) {
      const auto [l0, l1] = region_point(resolution, i, j);
      map.cells.push_back({i, j, l0, l1, 0, std::nullopt});
    }
  }
  internal::parallel_for(static_cast<int>(map.cells.size()), config.parallelism, [&](int c) {
    RegionCell& cell = map.cells[static_cast<size_t>(c)];
    const double l2 = static_cast<double>(resolution - cell.i - cell.j) / (3.0 * resolution);
    const std::vector<double> coeffs{cell.lambda0, cell.lambda1, l2};
    const SchmidtVector state = make_schmidt(coeffs, 3);
    SearchConfig local = config;
    local.parallelism = 1;
    local.seed = derive_seed(config.seed, {kCellStream, static_cast<std::uint64_t>(cell.i),
                                           static_cast<std::uint64_t>(cell.j)});
    NMaxResult result = n_max(state, local);
    cell.n_max = result.n_max;
    cell.witness = std::move(result.set);
  });
  return map;
}

SchmidtVector two_coefficient_state(double lambda0, int d) {
  if (d < 2) throw BadArguments(fmt::format("dimension must be >= 2, got {}", d));
  std::vector<double> l(static_cast<size_t>(d), 0.0);
  l[0] = lambda0;
  l[1] = 1.0 - lambda0;
  return make_schmidt(l, d);
}

ThresholdResult find_min_lambda0(int n, int d, const SearchConfig& config) {
  config.validate();
  if (d < 2 || n <= d || n > 2 * d) {
    throw BadArguments(fmt::format("need d < N <= 2d, got N={} d={}", n, d));
  }
  ThresholdResult out;
  auto probe = [&](double lambda0) {
    const SchmidtVector state = two_coefficient_state(lambda0, d);
    const AnalyticBound bound = analytic_lower_bound(state, config);
    ++out.probes;
    if (n <= bound.set.size()) {
      out.witness = bound.set.prefix(n);
      return true;
    }
    SearchConfig local = config;
    local.seed = derive_seed(config.seed, {kThresholdStream, static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(out.probes)});
    FeasibilityResult r = probe_with_retry(state, n, bound.set, local, nullptr);
    if (r.feasible()) out.witness = std::move(r.set);
    return r.feasible();
  };

  constexpr int kPrescan = 16;
  for (int k = 0; k < kPrescan; ++k) {
    const double l0 = 0.5 + k / 32.0;
    out.prescan.emplace_back(l0, probe(l0));
  }
  std::string pattern;
  for (const auto& [l0, ok] : out.prescan) pattern += ok ? '1' : '0';
  if (!out.prescan.front().second) {
    throw MonotonicityViolation(
        fmt::format("N={} d={}: not feasible at lambda0=1/2 (pre-scan {})", n, d, pattern));
  }
  const auto first_fail = pattern.find('0');
  if (first_fail != std::string::npos && pattern.find('1', first_fail) != std::string::npos) {
    throw MonotonicityViolation(fmt::format(
        "N={} d={}: feasibility is not a down-set in lambda0 (pre-scan {} on 1/2 + k/32)", n, d,
        pattern));
  }
  const size_t last_ok = first_fail == std::string::npos ? kPrescan - 1 : first_fail - 1;
  out.lo = out.prescan[last_ok].first;
  out.hi = first_fail == std::string::npos ? 1.0 : out.prescan[first_fail].first;
  while (out.hi - out.lo > 1e-3) {
    const double mid = 0.5 * (out.lo + out.hi);
    (probe(mid) ? out.lo : out.hi) = mid;
  }
  out.lambda0 = out.lo;
  return out;
}

double min_lambda0(int n, int d, const SearchConfig& config) {
  return find_min_lambda0(n, d, config).lambda0;
}

double min_entropy_for_N(int n, int d, const SearchConfig& config) {
  return entropy(two_coefficient_state(min_lambda0(n, d, config), d), d);
}

double capacity_lower_bound(int n, int d) {
  if (n < 1 || d < 2) throw BadArguments(fmt::format("need N >= 1 and d >= 2, got N={} d={}", n, d));
  if (n <= d) return 0.0;
  return std::log(static_cast<double>(n)) / std::log(static_cast<double>(d)) - 1.0;
}

}  // namespace densecode
