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
#include <initializer_list>
#include <random>

namespace densecode {

// Tolerances and budgets for every stochastic search in the library.
//
// Determinism contract: the outcome of a search is a pure function of the
// inputs and this struct. Per-task random streams are derived from `seed`
// and the task's index path via `derive_seed`, never from thread identity,
// so `parallelism` changes wall-clock time only.
struct SearchConfig {
  std::uint64_t seed = 1;
  int restarts = 64;
  int max_iterations = 2000;
  // Feasibility threshold on the max-abs off-diagonal weighted Gram entry.
  double ortho_tol = 1e-9;
  // Levenberg-Marquardt: initial damping relative to max diag(J^T J).
  double initial_damping = 1e-3;
  // A restart is abandoned when its cost improved by less than
  // `stall_ratio` (relative) over the last `stall_window` iterations.
  int stall_window = 60;
  double stall_ratio = 1e-3;
  int parallelism = 1;

  // Throws BadArguments when an invariant does not hold.
  void validate() const;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the task at `path` below `master` (e.g. {cell, n, restart}).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

using Rng = std::mt19937_64;

}  // namespace densecode
