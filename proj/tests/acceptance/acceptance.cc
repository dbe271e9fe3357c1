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

// Acceptance suite. Usage: densecode_acceptance <criterion 1-10> <work dir>
//
// Each run prints detail lines followed by exactly one verdict line
//   PASS criterion K: <summary>   or   FAIL criterion K: <summary>
// and exits 0 on PASS. Criteria 1-4 and 6 record a protocol round trip of
// every set they produce in <work dir>/roundtrip_K.json; criterion 8 adds the
// region-map witnesses and aggregates them. Criterion 9 reuses the map
// written by criterion 5.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli.h"
#include "densecode/constructions.h"
#include "densecode/io.h"
#include "densecode/protocol.h"
#include "densecode/search.h"
#include "densecode/unitary_param.h"
#include "support/oracles.h"

namespace densecode::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

fs::path g_work;

struct Verdict {
  bool pass = true;
  std::string summary;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<CMatrix> matrices(const OperatorSet& set) {
  std::vector<CMatrix> out;
  for (const Unitary& u : set.unitaries()) out.push_back(u.matrix());
  return out;
}

// Exhaustive encode -> decode over every letter of every set.
class RoundTrip {
 public:
  void add(const OperatorSet& set) {
    const std::vector<BipartiteVector> basis = measurement_basis(set);
    for (int letter = 0; letter < set.size(); ++letter) {
      const Decoded d = decode(encode(set, letter), basis);
      const double p = d.letter == letter ? d.probability : 0.0;
      worst_ = std::min(worst_, p);
      ++letters_;
    }
    ++sets_;
  }

  void save(int criterion) const {
    io::write_file(g_work / fmt::format("roundtrip_{}.json", criterion),
                   nlohmann::json{{"sets", sets_}, {"letters", letters_}, {"worst", worst_}}
                       .dump());
  }

 private:
  int sets_ = 0;
  long letters_ = 0;
  double worst_ = 1.0;
};

int cli(const std::vector<std::string>& args, std::string* output = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (output) *output = out.str();
  return code;
}

std::vector<double> random_simplex(int d, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> l(static_cast<size_t>(d));
  double sum = 0.0;
  for (double& x : l) sum += (x = e(rng));
  double head = 0.0;
  for (int i = 0; i + 1 < d; ++i) head += (l[static_cast<size_t>(i)] /= sum);
  l.back() = std::max(0.0, 1.0 - head);
  return l;
}

// Uniform on the simplex conditioned on max in [lo, hi], by rejection.
SchmidtVector sample_state(int d, double lo, double hi, std::mt19937_64& rng) {
  for (;;) {
    const auto l = random_simplex(d, rng);
    const double m = *std::max_element(l.begin(), l.end());
    if (m >= lo && m <= hi) return make_schmidt(l, d);
  }
}

Verdict criterion1() {
  RoundTrip rt;
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  for (int d = 3; d <= 8; ++d) {
    const OperatorSet set = d_plus_1_set(d);
    // Gram matrix must be the identity: the delta_kl chain for the U^k
    // family plus orthogonality to 1 and X.
    double dev = 0.0;
    const auto m = matrices(set);
    for (size_t i = 0; i < m.size(); ++i) {
      for (size_t j = 0; j < m.size(); ++j) {
        const auto g = oracle::weighted_trace(set.state().lambda(), m[i], m[j]);
        dev = std::max(dev, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    }
    ok = ok && set.size() == d + 1 && set.residual() < 1e-12 && dev < 1e-12;
    worst = std::max(worst, dev);
    std::cout << fmt::format("  d={} members={} residual={:.3g} max|G-I|={:.3g}\n", d, set.size(),
                             set.residual(), dev);
    rt.add(set);
  }
  const double elapsed = seconds_since(t0);

  // The explicit qutrit rotation and its inverse, through the verify command.
  const Unitary u = Unitary::from_matrix(oracle::qutrit_rotation());
  const OperatorSet explicit_set(make_schmidt({2.0 / 3, 1.0 / 3, 0.0}, 3),
                                 {Unitary::identity(3), shift(3, 1), u, u.adjoint()});
  const fs::path file = g_work / "qutrit_explicit.json";
  io::write_file(file, io::dump_json(io::operator_set_to_json(explicit_set)));
  const int verify = cli({"verify", file.string(), "--tol", "1e-12"});
  rt.add(explicit_set);
  rt.save(1);
  std::cout << fmt::format("  explicit qutrit set: verify exit {} residual {:.3g}\n", verify,
                           explicit_set.residual());
  return {ok && elapsed < 1.0 && verify == 0,
          fmt::format("d+1 sets for d=3..8 max|G-I|={:.2g} in {:.3f}s; explicit qutrit set "
                      "verify exit {}",
                      worst, elapsed, verify)};
}

Verdict criterion2() {
  RoundTrip rt;
  bool ok = true;
  for (int d = 2; d <= 8; ++d) {
    const OperatorSet w = weyl_set(d);
    const bool orth = is_orthogonal_set(uniform_state(d), w.unitaries(), 1e-12) &&
                      w.size() == d * d &&
                      oracle::max_offdiag(w.state().lambda(), matrices(w)) <= 1e-12;
    ok = ok && orth;
    rt.add(w);
  }
  // Each encoded qubit state equals a distinct Bell vector up to a phase.
  const auto basis = measurement_basis(weyl_set(2));
  const auto bell = oracle::bell_vectors();
  std::set<int> matched;
  double worst = 0.0;
  for (const BipartiteVector& v : basis) {
    int best = -1;
    double best_err = 1e300;
    for (int b = 0; b < 4; ++b) {
      const Complex overlap = bell[b].dot(v.amplitudes());
      const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
      const double err = (v.amplitudes() - phase * bell[b]).cwiseAbs().maxCoeff();
      if (err < best_err) best_err = err, best = b;
    }
    matched.insert(best);
    worst = std::max(worst, best_err);
  }
  rt.save(2);
  const bool bell_ok = matched.size() == 4 && worst <= 1e-12;
  return {ok && bell_ok, fmt::format("Weyl sets d=2..8 orthogonal at 1e-12: {}; qubit basis "
                                     "matches 4 distinct Bell vectors, max entry error {:.2g}",
                                     ok ? "yes" : "no", worst)};
}

Verdict criterion3() {
  RoundTrip rt;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  SearchConfig config;
  int feasible_total = 0, feasible_ok = 0, infeasible_total = 0, infeasible_ok = 0;
  double min_infeasible = 1e300;
  for (int d = 3; d <= 5; ++d) {
    for (int n = 2; n <= d; ++n) {
      int fok = 0, ftot = 0;
      // lambda0 >= 1/d for every state, so N = d has no state 1e-3 below 1/N.
      if (1.0 / n - 1e-3 >= 1.0 / d) {
        for (int t = 0; t < 200; ++t) {
          const SchmidtVector s = sample_state(d, 0.0, 1.0 / n - 1e-3, rng);
          const PhaseSolution sol = solve_phase_table(s, n, config);
          ++ftot;
          if (!sol.feasible()) continue;
          const OperatorSet set = product_set(s, *sol.table);
          if (set.size() == n * d &&
              oracle::max_offdiag(s.lambda(), matrices(set)) <= 1e-9) {
            ++fok;
            rt.add(set);
          }
        }
      }
      int iok = 0, itot = 0;
      SearchConfig probe = config;
      probe.restarts = 64;
      for (int t = 0; t < 200; ++t) {
        const SchmidtVector s = sample_state(d, 1.0 / n + 1e-3, 1.0, rng);
        const PhaseSolution sol = solve_phase_table(s, n, probe, {.trust_gate = false});
        ++itot;
        min_infeasible = std::min(min_infeasible, sol.best_residual);
        if (!sol.feasible() && sol.best_residual > 1e-6) ++iok;
      }
      std::cout << fmt::format("  d={} N={}: feasible side {}/{}, infeasible side {}/{}\n", d,
                               n, fok, ftot, iok, itot);
      feasible_total += ftot, feasible_ok += fok, infeasible_total += itot, infeasible_ok += iok;
    }
  }
  rt.save(3);
  const double elapsed = seconds_since(t0);
  return {feasible_ok == feasible_total && infeasible_ok == infeasible_total && elapsed < 300,
          fmt::format("phase tables {}/{} below 1/N; ungated search stayed above 1e-6 in {}/{} "
                      "above 1/N (min residual {:.3g}); {:.1f}s",
                      feasible_ok, feasible_total, infeasible_ok, infeasible_total,
                      min_infeasible, elapsed)};
}

Verdict criterion4() {
  RoundTrip rt;
  const auto t0 = Clock::now();
  SearchConfig config;
  config.restarts = 128;
  int not_found = 0;
  double min_residual = 1e300;
  for (int k = 0; k < 50; ++k) {
    const double l0 = 0.55 + 0.4 * k / 49.0;
    const FeasibilityResult r = feasible(make_schmidt({l0, 1.0 - l0}, 2), 3, config);
    if (!r.feasible() && r.best_residual > 1e-4) ++not_found;
    min_residual = std::min(min_residual, r.best_residual);
  }
  const FeasibilityResult bell = feasible(uniform_state(2), 4, config);
  if (bell.feasible()) rt.add(*bell.set);
  rt.save(4);
  const double elapsed = seconds_since(t0);
  return {not_found == 50 && bell.feasible() && elapsed < 120,
          fmt::format("N=3 NotFound with residual > 1e-4 for {}/50 qubit states (min {:.3g}); "
                      "N=4 at lambda0=1/2 {}; {:.1f}s",
                      not_found, min_residual, bell.feasible() ? "Feasible" : "NotFound",
                      elapsed)};
}

const std::vector<std::string> kMapArgs = {"map",  "--resolution", "24", "--restarts",
                                           "32",   "--seed",       "1",  "--out"};

std::vector<std::string> map_command(const fs::path& prefix) {
  std::vector<std::string> args = kMapArgs;
  args.push_back(prefix.string());
  return args;
}

// Lattice cells of each value must form one connected region.
bool contiguous(const std::map<std::pair<int, int>, int>& grid, int value) {
  std::set<std::pair<int, int>> cells;
  for (const auto& [ij, v] : grid) {
    if (v == value) cells.insert(ij);
  }
  if (cells.empty()) return false;
  std::set<std::pair<int, int>> seen{*cells.begin()};
  std::queue<std::pair<int, int>> todo;
  todo.push(*cells.begin());
  const int steps[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
  while (!todo.empty()) {
    const auto [i, j] = todo.front();
    todo.pop();
    for (const auto& s : steps) {
      const std::pair<int, int> next{i + s[0], j + s[1]};
      if (cells.count(next) && seen.insert(next).second) todo.push(next);
    }
  }
  return seen.size() == cells.size();
}

Verdict criterion5() {
  const auto t0 = Clock::now();
  const fs::path prefix = g_work / "region_run1";
  std::string out;
  const int code = cli(map_command(prefix), &out);
  const double elapsed = seconds_since(t0);
  std::cout << out;
  if (code != 0) return {false, fmt::format("map command exited {}", code)};
  fs::path csv = prefix;
  csv += ".csv";
  const auto rows = io::parse_region_csv(io::read_file(csv));
  const int r = 24;
  std::map<std::pair<int, int>, int> grid;
  size_t k = 0;
  bool layout = true;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; i + j <= r; ++j, ++k) {
      const auto [l0, l1] = region_point(r, i, j);
      layout = layout && k < rows.size() && rows[k].lambda0 == l0 && rows[k].lambda1 == l1;
      if (k < rows.size()) grid[{i, j}] = rows[k].n_max;
    }
  }
  layout = layout && rows.size() == k;
  std::string regions;
  bool steps = true;
  for (int v = 3; v <= 7; ++v) {
    const bool c = contiguous(grid, v);
    steps = steps && c;
    regions += fmt::format(" {}:{}", v, c ? "ok" : "missing-or-split");
  }
  int nines = 0, eights = 0, below = 0;
  for (const auto& [ij, v] : grid) {
    nines += v == 9;
    eights += v == 8;
    below += v < 3;
  }
  const bool nine_ok = nines == 1 && grid[{0, 0}] == 9;
  return {layout && steps && nine_ok && eights == 0 && below == 0 && elapsed <= 7200,
          fmt::format("regions{}; 9 only at uniform cell: {}; cells with 8: {}; {:.0f}s", regions,
                      nine_ok ? "yes" : "no", eights, elapsed)};
}

Verdict criterion6() {
  RoundTrip rt;
  const auto t0 = Clock::now();
  SearchConfig config;
  bool ok = true;
  std::string table;
  for (int d = 3; d <= 4; ++d) {
    for (int n = d + 1; n <= 2 * d; ++n) {
      const ThresholdResult t = find_min_lambda0(n, d, config);
      const double want = oracle::table_threshold(n, d);
      const bool hit = std::abs(t.lambda0 - want) <= 5e-3;
      ok = ok && hit;
      if (t.witness) rt.add(*t.witness);
      std::cout << fmt::format("  d={} N={}: lambda0={:.5f} expected {:.5f} bracket [{:.5f}, "
                               "{:.5f}] probes {}\n",
                               d, n, t.lambda0, want, t.lo, t.hi, t.probes);
      table += fmt::format(" ({},{})={:.4f}", d, n, t.lambda0);
    }
  }
  rt.save(6);
  const double elapsed = seconds_since(t0);
  return {ok && elapsed <= 3600, fmt::format("thresholds{} within 5e-3: {}; {:.0f}s", table,
                                             ok ? "yes" : "no", elapsed)};
}

Verdict criterion7() {
  SearchConfig config;
  bool ok = true;
  std::string detail;
  for (int n = 4; n <= 6; ++n) {
    const double s = min_entropy_for_N(n, 3, config);
    const double bound = capacity_lower_bound(n, 3);
    const double l0 = oracle::table_threshold(n, 3);
    const double derived = oracle::entropy({l0, 1.0L - l0, 0.0L}, 3.0L);
    const bool above = s >= bound - 1e-12;
    const bool equal = std::abs(s - bound) <= 1e-3;
    const bool equality_ok = (n == 6) == equal;
    const bool value_ok = std::abs(s - derived) <= 5e-3;
    ok = ok && above && equality_ok && value_ok;
    std::cout << fmt::format("  N={}: entropy {:.5f} bound {:.5f} expected {:.5f}\n", n, s, bound,
                             derived);
    detail += fmt::format(" N={}:{:.4f}", n, s);
  }
  return {ok, fmt::format("min entropies{} etrits; above the capacity bound, equal only at "
                          "N=6: {}",
                          detail, ok ? "yes" : "no")};
}

Verdict criterion8() {
  // Sets from the region map are regenerated here with the same seed.
  RoundTrip rt;
  SearchConfig config;
  config.restarts = 32;
  config.seed = 1;
  const RegionMap map = region_map(24, config);
  int witnesses = 0;
  for (const RegionCell& c : map.cells) {
    if (c.witness) rt.add(*c.witness), ++witnesses;
  }
  rt.save(5);
  fs::path run1 = g_work / "region_run1.csv";
  if (fs::exists(run1) && io::read_file(run1) != io::region_map_csv(map)) {
    return {false, "regenerated region map differs from the map command output"};
  }

  long letters = 0;
  int sets = 0;
  double worst = 1.0;
  std::string missing;
  for (int k = 1; k <= 6; ++k) {
    const fs::path p = g_work / fmt::format("roundtrip_{}.json", k);
    if (!fs::exists(p)) {
      missing += fmt::format(" {}", k);
      continue;
    }
    const auto j = nlohmann::json::parse(io::read_file(p));
    sets += j["sets"].get<int>();
    letters += j["letters"].get<long>();
    worst = std::min(worst, j["worst"].get<double>());
    std::cout << fmt::format("  criterion {}: {} sets, {} letters, worst p {:.17g}\n", k,
                             j["sets"].get<int>(), j["letters"].get<long>(),
                             j["worst"].get<double>());
  }
  if (!missing.empty()) {
    return {false, fmt::format("no round-trip record from criteria{}", missing)};
  }
  return {worst >= 1.0 - 1e-8, fmt::format("{} sets, {} letters decoded; worst success "
                                           "probability 1 - {:.2g}",
                                           sets, letters, 1.0 - worst)};
}

Verdict criterion9() {
  const auto t0 = Clock::now();
  fs::path first = g_work / "region_run1.csv";
  if (!fs::exists(first)) {
    const fs::path prefix = g_work / "region_run1";
    if (cli(map_command(prefix)) != 0) return {false, "first map run failed"};
  }
  const fs::path prefix = g_work / "region_run2";
  if (cli(map_command(prefix)) != 0) return {false, "second map run failed"};
  fs::path second = prefix;
  second += ".csv";
  const std::string a = io::read_file(first), b = io::read_file(second);
  return {a == b && !a.empty(),
          fmt::format("repeated map command: {} bytes, sha256 {} vs {}; {:.0f}s", a.size(),
                      io::sha256_hex(a).substr(0, 16), io::sha256_hex(b).substr(0, 16),
                      seconds_since(t0))};
}

Verdict criterion10() {
  Rng rng(10);
  std::normal_distribution<double> g(0.0, 0.7);
  std::mt19937_64 lrng(11);
  int passed = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const int n = d + 1 + (t / 3) % d;
    const SchmidtVector s = make_schmidt(random_simplex(d, lrng), d);
    std::vector<CMatrix> bases;
    for (int k = 0; k < n; ++k) bases.push_back(haar_unitary(d, rng));
    GramObjective obj(s, bases);
    Eigen::VectorXd x(obj.num_params());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g(rng);
    const Eigen::VectorXd grad = obj.gradient(x);
    Eigen::VectorXd fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      fd[i] = (obj.value(xp) - obj.value(xm)) / 2e-6;
    }
    const double rel = (grad - fd).norm() / std::max(fd.norm(), 1e-300);
    worst = std::max(worst, rel);
    passed += rel <= 1e-4;
  }
  return {passed == 100,
          fmt::format("{}/100 points within relative error 1e-4 (worst {:.2g})", passed, worst)};
}

}  // namespace
}  // namespace densecode::acceptance

int main(int argc, char** argv) {
  using namespace densecode::acceptance;
  if (argc != 3) {
    std::cerr << "usage: densecode_acceptance <criterion 1-10> <work dir>\n";
    return 2;
  }
  const int k = std::atoi(argv[1]);
  g_work = argv[2];
  fs::create_directories(g_work);
  const std::vector<std::function<Verdict()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  if (k < 1 || k > 10) {
    std::cerr << "criterion must be 1-10\n";
    return 2;
  }
  Verdict v;
  try {
    v = criteria[static_cast<size_t>(k - 1)]();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << v.summary
            << std::endl;
  return v.pass ? 0 : 1;
}
