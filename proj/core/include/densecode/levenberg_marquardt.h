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

#include <Eigen/Dense>

namespace densecode {

// Real least-squares problem min ||r(x)||^2.
class LeastSquaresProblem {
 public:
  virtual ~LeastSquaresProblem() = default;

  virtual int num_params() const = 0;
  virtual int num_residuals() const = 0;

  // Residuals at x; the Jacobian (num_residuals x num_params) when jac != nullptr.
  virtual void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r,
                        Eigen::MatrixXd* jac) const = 0;

  // Called after every accepted step. Problems on manifolds re-center here
  // (fold x into their base point and reset x), which is why the solver
  // re-evaluates after the call.
  virtual void accept(Eigen::VectorXd& x) { (void)x; }
};

struct LmOptions {
  int max_iterations = 2000;
  // Stop as soon as ||r||^2 <= target_cost.
  double target_cost = 0.0;
  double initial_damping = 1e-3;
  int stall_window = 60;
  double stall_ratio = 1e-3;
  double gradient_tol = 1e-15;
};

struct LmSummary {
  enum class Termination { Converged, MaxIterations, Stalled, DampingOverflow };

  double cost = 0.0;  // ||r||^2 at the returned x
  int iterations = 0;
  Termination termination = Termination::MaxIterations;
};

// Damped Gauss-Newton with the gain-ratio damping update (Nielsen). When the
// problem has fewer residuals than parameters the step is computed from the
// residual-space normal equations, h = -J^T (J J^T + mu I)^{-1} r.
LmSummary levenberg_marquardt(LeastSquaresProblem& problem, Eigen::VectorXd& x,
                              const LmOptions& options);

}  // namespace densecode
