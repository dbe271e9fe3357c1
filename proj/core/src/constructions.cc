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

#include "densecode/constructions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "densecode/errors.h"
#include "densecode/levenberg_marquardt.h"

namespace densecode {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kPhaseStream = 0x7068617365ULL;  // "phase"

// exp(2 pi i num / den), exact at quarter turns.
Complex unit_root(long long num, long long den) {
  long long r = num % den;
  if (r < 0) r += den;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == den) return {-1.0, 0.0};
  if (4 * r == den) return {0.0, 1.0};
  if (4 * r == 3 * den) return {0.0, -1.0};
  return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(den));
}

void require_dim(int d) {
  if (d < 2) throw DimensionError(fmt::format("dimension must be >= 2, got {}", d));
}

// Multi-start target for the phase table: residuals are the real and
// imaginary parts of G_mn = sum_i lambda_i exp(i(theta_i^m - theta_i^n)),
// m < n. Gauge: row 0 and column 0 of theta are pinned to zero.
class PhaseProblem final : public LeastSquaresProblem {
 public:
  PhaseProblem(const SchmidtVector& state, int n) : lambda_(state.lambda()), n_(n), d_(state.dim()) {}

  int num_params() const override { return (n_ - 1) * (d_ - 1); }
  int num_residuals() const override { return n_ * (n_ - 1); }

  Eigen::MatrixXd table(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(n_, d_);
    for (int row = 1; row < n_; ++row) {
      for (int i = 1; i < d_; ++i) theta(row, i) = x[index(row, i)];
    }
    return theta;
  }

  void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r,
                Eigen::MatrixXd* jac) const override {
    const Eigen::MatrixXd theta = table(x);
    if (jac != nullptr) jac->setZero(num_residuals(), num_params());
    int k = 0;
    for (int m = 0; m < n_; ++m) {
      for (int n = m + 1; n < n_; ++n, k += 2) {
        Complex g = 0.0;
        for (int i = 0; i < d_; ++i) {
          const Complex term = lambda_[i] * std::polar(1.0, theta(m, i) - theta(n, i));
          g += term;
          if (jac == nullptr || i == 0) continue;
          // d/dtheta(m,i) = i*term, d/dtheta(n,i) = -i*term
          const Complex dterm = Complex(0.0, 1.0) * term;
          if (m > 0) {
            (*jac)(k, index(m, i)) += dterm.real();
            (*jac)(k + 1, index(m, i)) += dterm.imag();
          }
          (*jac)(k, index(n, i)) -= dterm.real();
          (*jac)(k + 1, index(n, i)) -= dterm.imag();
        }
        r[k] = g.real();
        r[k + 1] = g.imag();
      }
    }
  }

 private:
  int index(int row, int i) const { return (row - 1) * (d_ - 1) + (i - 1); }

  std::vector<double> lambda_;
  int n_;
  int d_;
};

PhaseTable wrap_angles(Eigen::MatrixXd theta) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    double a = std::fmod(theta.data()[i], kTwoPi);
    if (a < 0.0) a += kTwoPi;
    theta.data()[i] = a;
  }
  theta.row(0).setZero();
  return PhaseTable(std::move(theta));
}

bool partition_dfs(const std::vector<int>& order, size_t pos, const SchmidtVector& state,
                   double target, double tol, std::vector<double>& sums,
                   std::vector<std::vector<int>>& groups) {
  if (pos == order.size()) {
    return std::all_of(sums.begin(), sums.end(),
                       [&](double s) { return std::abs(s - target) <= tol; });
  }
  const int idx = order[pos];
  bool tried_empty = false;
  for (size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) {
      if (tried_empty) continue;  // empty groups are interchangeable
      tried_empty = true;
    }
    if (sums[g] + state[idx] > target + tol) continue;
    sums[g] += state[idx];
    groups[g].push_back(idx);
    if (partition_dfs(order, pos + 1, state, target, tol, sums, groups)) return true;
    groups[g].pop_back();
    sums[g] -= state[idx];
  }
  return false;
}

}  // namespace

Unitary shift(int d, int m) {
  require_dim(d);
  if (m < 0 || m >= d) throw DimensionError(fmt::format("shift power {} outside [0, {})", m, d));
  CMatrix x = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) x((k + m) % d, k) = 1.0;
  return Unitary::unchecked(std::move(x));
}

Unitary rotate(int d, int n) {
  require_dim(d);
  if (n < 0 || n >= d) throw DimensionError(fmt::format("rotate power {} outside [0, {})", n, d));
  CMatrix z = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) z(k, k) = unit_root(static_cast<long long>(k) * n, d);
  return Unitary::unchecked(std::move(z));
}

OperatorSet weyl_set(int d) {
  require_dim(d);
  std::vector<Unitary> members;
  members.reserve(static_cast<size_t>(d * d));
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) members.push_back(shift(d, m) * rotate(d, n));
  }
  return OperatorSet(uniform_state(d), std::move(members));
}

OperatorSet shift_set(const SchmidtVector& state) {
  std::vector<Unitary> members;
  for (int m = 0; m < state.dim(); ++m) members.push_back(shift(state.dim(), m));
  return OperatorSet(state, std::move(members));
}

PhaseTable::PhaseTable(Eigen::MatrixXd theta) : theta_(std::move(theta)) {
  if (theta_.rows() < 1 || theta_.cols() < 2) {
    throw BadArguments("phase table needs at least one row and two columns");
  }
  if (!theta_.row(0).isZero(0.0)) {
    throw BadArguments("phase table row 0 must be all zeros (identity gauge)");
  }
}

Unitary PhaseTable::phase_operator(int n) const {
  if (n < 0 || n >= count()) throw BadArguments(fmt::format("phase row {} out of range", n));
  CMatrix z = CMatrix::Zero(dim(), dim());
  for (int k = 0; k < dim(); ++k) z(k, k) = std::polar(1.0, theta_(n, k));
  return Unitary::unchecked(std::move(z));
}

double phase_residual(const SchmidtVector& state, const PhaseTable& table) {
  if (table.dim() != state.dim()) throw DimensionError("phase table dimension mismatch");
  double total = 0.0;
  for (int m = 0; m < table.count(); ++m) {
    for (int n = m + 1; n < table.count(); ++n) {
      Complex g = 0.0;
      for (int i = 0; i < state.dim(); ++i) {
        g += state[i] * std::polar(1.0, table.theta()(m, i) - table.theta()(n, i));
      }
      total += std::norm(g);
    }
  }
  return total;
}

std::vector<double> polygon_phases(const SchmidtVector& state) {
  const double a = state.largest();
  if (a > 0.5) {
    throw PolygonImpossible(
        fmt::format("largest Schmidt coefficient {:.17g} exceeds 1/2", a));
  }
  const int d = state.dim();
  // Greedy two-way split of the remaining weights (already descending).
  std::vector<int> side(static_cast<size_t>(d), 0);
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 1; i < d; ++i) {
    if (s1 <= s2) {
      s1 += state[i];
      side[i] = 1;
    } else {
      s2 += state[i];
      side[i] = 2;
    }
  }
  // Triangle with sides a, s1, s2. Kahan's area formula keeps nearly flat
  // triangles accurate, which the boundary lambda0 = 1/2 produces.
  double x = a, y = s1, z = s2;
  if (x < y) std::swap(x, y);
  if (x < z) std::swap(x, z);
  if (y < z) std::swap(y, z);
  const double prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  const double twice_area = 0.5 * std::sqrt(std::max(prod, 0.0));
  // Side vectors placed head to tail: a along +x, s1 above, s2 below.
  const double h = twice_area / a;
  const double angle1 = std::atan2(h, -(a * a + s1 * s1 - s2 * s2) / (2.0 * a));
  const double angle2 = std::atan2(-h, -(a * a + s2 * s2 - s1 * s1) / (2.0 * a));

  std::vector<double> theta(static_cast<size_t>(d), 0.0);
  for (int i = 1; i < d; ++i) {
    double t = side[i] == 1 ? angle1 : angle2;
    if (t < 0.0) t += kTwoPi;
    theta[i] = t;
  }
  return theta;
}

OperatorSet product_set(const SchmidtVector& state, const PhaseTable& table) {
  const int d = state.dim();
  if (table.dim() != d) {
    throw DimensionError(
        fmt::format("phase table has d={}, state has d={}", table.dim(), d));
  }
  std::vector<Unitary> members;
  members.reserve(static_cast<size_t>(d * table.count()));
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < table.count(); ++n) {
      members.push_back(shift(d, m) * table.phase_operator(n));
    }
  }
  OperatorSet set(state, std::move(members));
  if (!set.is_orthogonal()) {
    throw Infeasible(fmt::format(
        "phase table is not orthogonal on this state (gram residual {:.3g})", set.residual()));
  }
  return set;
}

SchmidtVector d_plus_1_state(int d) {
  if (d < 3) throw BadArguments(fmt::format("the d+1 construction needs d >= 3, got {}", d));
  std::vector<double> l(static_cast<size_t>(d), 0.0);
  l[0] = static_cast<double>(d - 1) / d;
  l[1] = 1.0 / d;
  return make_schmidt(l, d);
}

Unitary d_plus_1_rotation(int d, int k) {
  if (d < 3) throw BadArguments(fmt::format("the d+1 construction needs d >= 3, got {}", d));
  if (k < 0 || k > d - 2) throw BadArguments(fmt::format("k={} outside [0, {}]", k, d - 2));
  CMatrix u = CMatrix::Zero(d, d);
  const double amp = std::sqrt(static_cast<double>(d)) / (d - 1);
  u(0, 0) = -1.0 / (d - 1);
  for (int j = 1; j <= d - 2; ++j) {
    u(j + 1, 0) = amp * unit_root(static_cast<long long>(k) * j, d - 1);
  }
  u(1, 1) = 1.0;
  // Modified Gram-Schmidt on e_2, ..., e_{d-1}, two passes.
  for (int c = 2; c < d; ++c) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(d, c);
    for (int pass = 0; pass < 2; ++pass) {
      for (int prev = 0; prev < c; ++prev) v -= u.col(prev).dot(v) * u.col(prev);
    }
    u.col(c) = v / v.norm();
  }
  return Unitary::from_matrix(std::move(u));
}

OperatorSet d_plus_1_set(int d) {
  SchmidtVector state = d_plus_1_state(d);
  std::vector<Unitary> members{Unitary::identity(d), shift(d, 1)};
  for (int k = 0; k <= d - 2; ++k) members.push_back(d_plus_1_rotation(d, k));
  return OperatorSet(std::move(state), std::move(members));
}

std::optional<PhaseTable> grouped_phase_set(const SchmidtVector& state,
                                            const std::vector<std::vector<int>>& grouping) {
  const int d = state.dim();
  const int n = static_cast<int>(grouping.size());
  if (n < 1) throw BadPartition("grouping has no groups");
  std::vector<int> label(static_cast<size_t>(d), -1);
  for (int g = 0; g < n; ++g) {
    if (grouping[g].empty()) throw BadPartition(fmt::format("group {} is empty", g));
    for (int idx : grouping[g]) {
      if (idx < 0 || idx >= d) throw BadPartition(fmt::format("index {} outside [0, {})", idx, d));
      if (label[idx] != -1) throw BadPartition(fmt::format("index {} appears twice", idx));
      label[idx] = g;
    }
  }
  for (int i = 0; i < d; ++i) {
    if (label[i] == -1 && state[i] != 0.0) {
      throw BadPartition(fmt::format("index {} has nonzero weight but no group", i));
    }
  }
  for (int g = 0; g < n; ++g) {
    double sum = 0.0;
    for (int idx : grouping[g]) sum += state[idx];
    if (std::abs(sum - 1.0 / n) > 1e-9) return std::nullopt;
  }
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(n, d);
  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < d; ++i) {
      if (label[i] < 0) continue;
      const long long r = (static_cast<long long>(label[i]) * row) % n;
      theta(row, i) = kTwoPi * static_cast<double>(r) / n;
    }
  }
  return PhaseTable(std::move(theta));
}

std::optional<std::vector<std::vector<int>>> find_equal_partition(const SchmidtVector& state,
                                                                  int n, double tol) {
  if (n < 1) return std::nullopt;
  std::vector<int> order;
  std::vector<int> zeros;
  for (int i = 0; i < state.dim(); ++i) (state[i] > 0.0 ? order : zeros).push_back(i);
  if (static_cast<int>(order.size()) < n) return std::nullopt;
  std::vector<double> sums(static_cast<size_t>(n), 0.0);
  std::vector<std::vector<int>> groups(static_cast<size_t>(n));
  if (!partition_dfs(order, 0, state, 1.0 / n, tol, sums, groups)) return std::nullopt;
  for (int z : zeros) groups[0].push_back(z);
  return groups;
}

PhaseSolution solve_phase_table(const SchmidtVector& state, int n, const SearchConfig& config,
                                PhaseSolveOptions options) {
  config.validate();
  const int d = state.dim();
  if (n < 2 || n > d) {
    throw BadArguments(fmt::format("phase operator count {} outside [2, {}]", n, d));
  }
  PhaseSolution out;
  if (options.trust_gate) {
    if (state.largest() > 1.0 / n + 1e-12) {
      out.route = PhaseSolution::Route::Gate;
      out.best_residual = std::numeric_limits<double>::infinity();
      return out;
    }
    if (n == 2) {
      const std::vector<double> theta = polygon_phases(state);
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, d);
      for (int i = 0; i < d; ++i) t(1, i) = theta[i];
      out.table.emplace(std::move(t));
      out.route = PhaseSolution::Route::Polygon;
      out.best_residual = phase_residual(state, *out.table);
      return out;
    }
    if (auto groups = find_equal_partition(state, n)) {
      out.table = grouped_phase_set(state, *groups);
      out.route = PhaseSolution::Route::Grouping;
      out.best_residual = phase_residual(state, *out.table);
      return out;
    }
  }

  out.route = PhaseSolution::Route::Numeric;
  out.best_residual = std::numeric_limits<double>::infinity();
  PhaseProblem problem(state, n);
  const double accept = config.ortho_tol * config.ortho_tol;
  LmOptions lm;
  lm.max_iterations = config.max_iterations;
  lm.target_cost = 0.01 * accept;
  lm.initial_damping = config.initial_damping;
  lm.stall_window = config.stall_window;
  lm.stall_ratio = config.stall_ratio;

  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(derive_seed(config.seed, {kPhaseStream, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(r)}));
    Eigen::VectorXd x(problem.num_params());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = angle(rng);
    levenberg_marquardt(problem, x, lm);
    PhaseTable table = wrap_angles(problem.table(x));
    const double res = phase_residual(state, table);
    out.best_residual = std::min(out.best_residual, res);
    out.restarts_used = r + 1;
    if (res < accept) {
      out.table.emplace(std::move(table));
      out.best_residual = res;
      return out;
    }
  }
  return out;
}

}  // namespace densecode
