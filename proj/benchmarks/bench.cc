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

#include <vector>

#include <benchmark/benchmark.h>

#include "densecode/constructions.h"
#include "densecode/protocol.h"
#include "densecode/qstate.h"
#include "densecode/search.h"
#include "densecode/unitary_param.h"

namespace {

using namespace densecode;

void BM_GramResidual(benchmark::State& st) {
  const int d = static_cast<int>(st.range(0));
  const OperatorSet set = weyl_set(d);
  for (auto _ : st) benchmark::DoNotOptimize(gram_residual(set.state(), set.unitaries()));
}
BENCHMARK(BM_GramResidual)->Arg(3)->Arg(5)->Arg(8);

// One objective plus Jacobian evaluation, the inner loop of every search.
void BM_GramObjectiveJacobian(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Rng rng(3);
  std::vector<CMatrix> bases;
  for (int k = 0; k < n; ++k) bases.push_back(haar_unitary(3, rng));
  const GramObjective obj(make_schmidt({0.5, 0.3, 0.2}, 3), bases);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(obj.num_params(), 0.01);
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  for (auto _ : st) {
    obj.evaluate(x, r, &jac);
    benchmark::DoNotOptimize(jac.data());
  }
}
BENCHMARK(BM_GramObjectiveJacobian)->Arg(4)->Arg(6)->Arg(9);

void BM_SolvePhaseTable(benchmark::State& st) {
  const SchmidtVector s = make_schmidt({0.24, 0.2, 0.2, 0.18, 0.18}, 5);
  SearchConfig config;
  config.restarts = 8;
  for (auto _ : st) {
    benchmark::DoNotOptimize(solve_phase_table(s, 4, config, {.trust_gate = false}));
  }
}
BENCHMARK(BM_SolvePhaseTable)->Unit(benchmark::kMillisecond);

void BM_FeasibleQutrit(benchmark::State& st) {
  const SchmidtVector s = make_schmidt({0.6, 0.3, 0.1}, 3);
  SearchConfig config;
  config.restarts = 4;
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(feasible(s, n, config));
}
BENCHMARK(BM_FeasibleQutrit)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SimulateMessage(benchmark::State& st) {
  const OperatorSet set = d_plus_1_set(3);
  std::vector<int> message(64);
  for (size_t i = 0; i < message.size(); ++i) message[i] = static_cast<int>(i % 4);
  for (auto _ : st) benchmark::DoNotOptimize(simulate(set, message, 1, 0));
}
BENCHMARK(BM_SimulateMessage)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
