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

#include "densecode/levenberg_marquardt.h"

#include <algorithm>
#include <cmath>
#include <deque>

namespace densecode {

namespace {

// Solves (J^T J + mu I) h = -g via whichever normal equations are smaller.
Eigen::VectorXd damped_step(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r,
                            const Eigen::VectorXd& g, double mu) {
  const Eigen::Index m = jac.rows();
  const Eigen::Index n = jac.cols();
  if (m < n) {
    Eigen::MatrixXd a = jac * jac.transpose();
    a.diagonal().array() += mu;
    return -jac.transpose() * a.ldlt().solve(r);
  }
  Eigen::MatrixXd a = jac.transpose() * jac;
  a.diagonal().array() += mu;
  return -a.ldlt().solve(g);
}

}  // namespace

LmSummary levenberg_marquardt(LeastSquaresProblem& problem, Eigen::VectorXd& x,
                              const LmOptions& options) {
  using Termination = LmSummary::Termination;
  const int m = problem.num_residuals();
  const int n = problem.num_params();

  LmSummary summary;
  Eigen::VectorXd r(m);
  Eigen::VectorXd r_trial(m);
  Eigen::MatrixXd jac(m, n);

  problem.evaluate(x, r, &jac);
  double cost = r.squaredNorm();
  Eigen::VectorXd g = jac.transpose() * r;

  double mu = options.initial_damping *
              std::max(jac.colwise().squaredNorm().maxCoeff(), 1e-300);
  double nu = 2.0;
  std::deque<double> history{cost};

  for (int it = 0; it < options.max_iterations; ++it) {
    summary.iterations = it;
    if (cost <= options.target_cost) {
      summary.termination = Termination::Converged;
      summary.cost = cost;
      return summary;
    }
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tol) {
      summary.termination = Termination::Stalled;
      summary.cost = cost;
      return summary;
    }

    const Eigen::VectorXd h = damped_step(jac, r, g, mu);
    Eigen::VectorXd x_trial = x + h;
    problem.evaluate(x_trial, r_trial, nullptr);
    const double cost_trial = r_trial.squaredNorm();

    // Predicted decrease of ||r||^2 under the linear model, h^T (mu h - g).
    const double predicted = h.dot(mu * h - g);
    const double rho = predicted > 0.0 ? (cost - cost_trial) / predicted : -1.0;

    if (rho > 0.0 && std::isfinite(cost_trial)) {
      x = std::move(x_trial);
      problem.accept(x);
      problem.evaluate(x, r, &jac);
      cost = r.squaredNorm();
      g = jac.transpose() * r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;

      history.push_back(cost);
      if (static_cast<int>(history.size()) > options.stall_window) {
        const double old = history.front();
        history.pop_front();
        if (old - cost < options.stall_ratio * cost) {
          summary.iterations = it + 1;
          summary.termination = Termination::Stalled;
          summary.cost = cost;
          return summary;
        }
      }
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e30 || !std::isfinite(mu)) {
        summary.iterations = it + 1;
        summary.termination = Termination::DampingOverflow;
        summary.cost = cost;
        return summary;
      }
    }
  }
  summary.iterations = options.max_iterations;
  summary.termination = cost <= options.target_cost ? Termination::Converged
                                                     : Termination::MaxIterations;
  summary.cost = cost;
  return summary;
}

}  // namespace densecode
