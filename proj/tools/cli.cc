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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "densecode/constructions.h"
#include "densecode/errors.h"
#include "densecode/io.h"
#include "densecode/protocol.h"
#include "densecode/search.h"

#ifndef DENSECODE_VERSION
#define DENSECODE_VERSION "unknown"
#endif

namespace densecode::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string kind;
  std::string state;
  bool normalize = false;
  double snap_tol = 1e-6;
  int d = 0;
  int n = 0;
  bool max = false;
  std::string groups;
  std::string set_file;
  std::string out;
  std::string message;
  std::string n_range;
  int shots = 0;
  int resolution = 24;
  double tol = kOrthogonalityTol;
  SearchConfig config;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  for (;;) {
    const size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token) {
  token = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw BadArguments(fmt::format("not a number: '{}'", token));
  }
  return v;
}

std::optional<double> snap(double x, double tol) {
  for (int q = 1; q <= 100; ++q) {
    const double p = std::round(x * q);
    if (std::abs(p / q - x) <= tol) return p / q;
  }
  return std::nullopt;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("DENSECODE_SEED");
  if (env == nullptr || *env == '\0') return 1;
  std::uint64_t seed = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw BadArguments(fmt::format("DENSECODE_SEED is not an unsigned integer: '{}'", s));
  }
  return seed;
}

json config_json(const Options& o) {
  const SearchConfig& c = o.config;
  return {{"seed", c.seed},
          {"restarts", c.restarts},
          {"max_iterations", c.max_iterations},
          {"ortho_tol", c.ortho_tol},
          {"initial_damping", c.initial_damping},
          {"stall_window", c.stall_window},
          {"stall_ratio", c.stall_ratio},
          {"parallelism", c.parallelism}};
}

json state_json(const SchmidtVector& s) { return {{"d", s.dim()}, {"lambda", s.lambda()}}; }

SchmidtVector require_state(const Options& o) {
  if (o.state.empty()) throw BadArguments("--state is required");
  SchmidtVector s = parse_state(o.state, o.normalize, o.snap_tol);
  if (o.d != 0 && o.d != s.dim()) {
    throw BadArguments(fmt::format("--d {} does not match a state of {} coefficients", o.d,
                                   s.dim()));
  }
  return s;
}

int require_d(const Options& o) {
  if (o.d != 0) return o.d;
  if (!o.state.empty()) return parse_state(o.state, o.normalize, o.snap_tol).dim();
  throw BadArguments("--d is required");
}

std::vector<std::vector<int>> parse_groups(const std::string& text) {
  std::vector<std::vector<int>> groups;
  for (std::string_view g : split(text, ';')) groups.push_back(parse_int_list(std::string(g)));
  return groups;
}

OperatorSet build_set(const Options& o) {
  if (o.kind == "weyl") {
    const int d = require_d(o);
    OperatorSet maximal = weyl_set(d);
    if (o.state.empty()) return maximal;
    return OperatorSet(require_state(o), maximal.unitaries());
  }
  if (o.kind == "d-plus-1") return d_plus_1_set(require_d(o));
  if (o.kind == "phases") {
    const SchmidtVector s = require_state(o);
    if (o.n < 2) throw BadArguments("--n >= 2 is required");
    const PhaseSolution sol = solve_phase_table(s, o.n, o.config);
    if (!sol.feasible()) {
      if (sol.route == PhaseSolution::Route::Gate) {
        throw Infeasible(fmt::format("lambda0 exceeds 1/N ({} > 1/{})", s[0], o.n));
      }
      throw Infeasible(fmt::format("no phase table found (best residual {:.3g})",
                                   sol.best_residual));
    }
    return product_set(s, *sol.table);
  }
  if (o.kind == "grouped") {
    const SchmidtVector s = require_state(o);
    std::vector<std::vector<int>> groups;
    if (!o.groups.empty()) {
      groups = parse_groups(o.groups);
    } else {
      if (o.n < 2) throw BadArguments("grouped needs --groups or --n >= 2");
      auto found = find_equal_partition(s, o.n);
      if (!found) throw Infeasible(fmt::format("no partition into {} groups of weight 1/{}",
                                               o.n, o.n));
      groups = std::move(*found);
    }
    const auto table = grouped_phase_set(s, groups);
    if (!table) throw Infeasible("groups do not each carry weight 1/N");
    return product_set(s, *table);
  }
  throw BadArguments(fmt::format("unknown construction '{}'", o.kind));
}

struct Output {
  fs::path path;
  std::string content;
};

// Writes every output plus `<stem>.manifest.json` beside them.
void write_outputs(const fs::path& stem, const std::vector<Output>& outputs,
                   const std::string& command, const std::vector<std::string>& argv,
                   const json& config, const json& state, double seconds) {
  io::RunManifest m;
  m.command = command;
  m.argv = argv;
  m.config = config;
  m.state = state;
  m.version = DENSECODE_VERSION;
  m.duration_seconds = seconds;
  for (const Output& o : outputs) {
    io::write_file(o.path, o.content);
    m.outputs.push_back({o.path, io::sha256_hex(o.content)});
  }
  fs::path manifest = stem;
  manifest += ".manifest.json";
  io::write_file(manifest, io::dump_json(io::manifest_to_json(m)));
}

fs::path stem_of(const std::string& out) {
  fs::path p(out);
  if (p.has_extension()) p.replace_extension();
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Adding 0.0 turns -0 into +0 so the report never prints "-0".
std::string format_complex(Complex z) {
  return fmt::format("{:.15g}{:+.15g}i", z.real() + 0.0, z.imag() + 0.0);
}

const char* dit_unit(int d) {
  switch (d) {
    case 2:
      return "bits";
    case 3:
      return "trits";
    default:
      return "dits";
  }
}

int cmd_construct(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const OperatorSet set = build_set(o);
  if (!set.is_orthogonal(kOrthogonalityTol)) {
    throw Infeasible(fmt::format("construction is not orthogonal (residual {:.3g})",
                                 set.residual()));
  }
  const json doc = io::operator_set_to_json(set, {{"construction", o.kind}});
  out << fmt::format("N {}\ngram_residual {}\n", set.size(), io::format_double(set.residual()));
  if (o.out.empty()) {
    out << io::dump_json(doc);
  } else {
    write_outputs(stem_of(o.out), {{o.out, io::dump_json(doc)}}, "construct", argv,
                  config_json(o), state_json(set.state()), seconds_since(t0));
    out << "wrote " << o.out << "\n";
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const io::LoadedSet loaded = io::operator_set_from_json(json::parse(io::read_file(o.set_file)));
  const OperatorSet& set = loaded.set;
  double unitarity = 0.0;
  for (const Unitary& u : set.unitaries()) unitarity = std::max(unitarity, u.unitarity_error());
  const CMatrix g = set.gram();
  out << fmt::format("d {}\nN {}\n", set.dim(), set.size());
  out << "lambda";
  for (double l : set.state().lambda()) out << ' ' << fmt::format("{:.15g}", l);
  out << fmt::format("\nmax_unitarity_error {:.15g}\ngram_residual {:.15g}\ngram\n", unitarity,
                     set.residual());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      out << (j == 0 ? "" : " ") << format_complex(g(i, j));
    }
    out << "\n";
  }
  const bool ok = set.is_orthogonal(o.tol);
  out << fmt::format("orthogonal {} (tol {:.3g})\n", ok ? "yes" : "no", o.tol);
  return ok ? kOk : kNegative;
}

json probes_json(const std::vector<FrontierProbe>& probes) {
  json arr = json::array();
  for (const FrontierProbe& p : probes) {
    arr.push_back({{"n", p.n}, {"restarts", p.restarts}, {"best_residual", p.best_residual}});
  }
  return arr;
}

int cmd_search(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const SchmidtVector state = require_state(o);
  if (o.max == (o.n != 0)) throw BadArguments("give exactly one of --n or --max");
  json report;
  std::optional<OperatorSet> set;
  int code = kOk;
  if (o.max) {
    NMaxResult r = n_max(state, o.config);
    report = {{"n_max", r.n_max},
              {"analytic_bound", r.analytic_bound},
              {"gram_residual", r.set.residual()},
              {"evidence", probes_json(r.evidence)}};
    set = std::move(r.set);
  } else {
    FeasibilityResult r = feasible(state, o.n, o.config);
    report = {{"status", r.feasible() ? "Feasible" : "NotFound"},
              {"n", o.n},
              {"best_residual", r.best_residual},
              {"restarts_used", r.restarts_used},
              {"route", r.route}};
    if (r.feasible()) set = std::move(r.set);
    code = r.feasible() ? kOk : kNegative;
  }
  report["state"] = state.lambda();
  out << report.dump(2) << "\n";
  if (!o.out.empty() && set) {
    const json doc = io::operator_set_to_json(*set, {{"search", report}});
    write_outputs(stem_of(o.out), {{o.out, io::dump_json(doc)}}, "search", argv, config_json(o),
                  state_json(state), seconds_since(t0));
  }
  return code;
}

int cmd_map(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.out.empty()) throw BadArguments("--out is required");
  const RegionMap map = region_map(o.resolution, o.config);
  std::map<int, int> histogram;
  for (const RegionCell& c : map.cells) ++histogram[c.n_max];
  const fs::path stem(o.out);
  fs::path csv = stem, svg = stem;
  csv += ".csv";
  svg += ".svg";
  json config = config_json(o);
  config["resolution"] = o.resolution;
  write_outputs(stem, {{csv, io::region_map_csv(map)}, {svg, io::region_map_svg(map)}}, "map",
                argv, config, nullptr, seconds_since(t0));
  for (const auto& [n, count] : histogram) out << fmt::format("n_max {} cells {}\n", n, count);
  out << "wrote " << csv.string() << " " << svg.string() << "\n";
  return kOk;
}

std::pair<int, int> parse_range(const std::string& text) {
  const size_t dots = text.find("..");
  if (dots == std::string::npos) {
    const int n = parse_int_list(text).at(0);
    return {n, n};
  }
  const auto lo = parse_int_list(text.substr(0, dots));
  const auto hi = parse_int_list(text.substr(dots + 2));
  if (lo.size() != 1 || hi.size() != 1) throw BadArguments("--n-range must be a..b");
  return {lo[0], hi[0]};
}

int cmd_minent(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (o.d < 2) throw BadArguments("--d >= 2 is required");
  const auto [lo, hi] = parse_range(o.n_range);
  if (lo > hi || lo <= o.d || hi > 2 * o.d) {
    throw BadArguments(fmt::format("--n-range must satisfy {} < a <= b <= {}", o.d, 2 * o.d));
  }
  std::vector<io::MinEntRow> rows;
  for (int n = lo; n <= hi; ++n) {
    const ThresholdResult t = find_min_lambda0(n, o.d, o.config);
    const double s = entropy(two_coefficient_state(t.lambda0, o.d), o.d);
    rows.push_back({n, o.d, t.lambda0, s, capacity_lower_bound(n, o.d)});
  }
  const std::string table = io::minent_table_csv(rows);
  out << table;
  if (!o.out.empty()) {
    const fs::path stem(o.out);
    fs::path table_path = stem, figure_path = stem;
    table_path += ".table.csv";
    figure_path += ".figure.csv";
    json config = config_json(o);
    config["d"] = o.d;
    config["n_range"] = {lo, hi};
    write_outputs(stem, {{table_path, table}, {figure_path, io::minent_figure_csv(rows)}},
                  "minent", argv, config, nullptr, seconds_since(t0));
  }
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.set_file.empty() == o.kind.empty()) {
    throw BadArguments("give exactly one of --set or --construct");
  }
  const OperatorSet set =
      o.set_file.empty()
          ? build_set(o)
          : io::operator_set_from_json(json::parse(io::read_file(o.set_file))).set;
  if (!set.is_orthogonal(o.tol)) {
    throw Infeasible(fmt::format("set is not orthogonal at tol {:.3g} (residual {:.3g})", o.tol,
                                 set.residual()));
  }
  const std::vector<int> message = parse_int_list(o.message);
  const SimulationReport r = simulate(set, message, o.config.seed, o.shots);
  out << fmt::format("d {}\nN {}\nrate {:.6g} {}/use\n", set.dim(), set.size(), r.dits_per_use,
                     dit_unit(set.dim()));
  for (size_t k = 0; k < message.size(); ++k) {
    out << fmt::format("sent {} decoded {} p {:.15g}", r.message[k], r.decoded[k],
                       r.success_probability[k]);
    if (r.shots > 0) {
      out << " counts";
      for (int c : r.shot_counts[k]) out << ' ' << c;
    }
    out << "\n";
  }
  // Deterministic dense coding needs every letter decoded with certainty.
  const bool ok = r.perfect(1e-8);
  out << fmt::format("result {}\n", ok ? "perfect" : "imperfect");
  return ok ? kOk : kNegative;
}

void add_state_options(CLI::App* sub, Options& o) {
  sub->add_option("--state", o.state, "Schmidt coefficients, e.g. 0.6,0.4,0 or 2/3,1/3,0");
  sub->add_flag("--normalize", o.normalize, "Divide the coefficients by their sum");
  sub->add_option("--snap-tol", o.snap_tol,
                  "Snap decimals to nearby fractions (denominator <= 100); 0 disables")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--d", o.d, "Local dimension")->check(CLI::Range(2, 64));
}

void add_search_options(CLI::App* sub, Options& o) {
  sub->add_option("--restarts", o.config.restarts, "Optimizer restarts per probe");
  sub->add_option("--iterations", o.config.max_iterations, "Iteration cap per restart");
  sub->add_option("--seed", o.config.seed, "Master seed (default $DENSECODE_SEED or 1)");
  sub->add_option("--jobs", o.config.parallelism, "Worker threads");
}

void add_construct_options(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Alphabet size (phases: number of phase operators)");
  sub->add_option("--groups", o.groups, "Index groups, e.g. 0,3;1,2");
}

}  // namespace

SchmidtVector parse_state(const std::string& text, bool normalize, double snap_tol) {
  std::vector<double> raw;
  std::vector<bool> exact;
  for (std::string_view token : split(text, ',')) {
    token = trim(token);
    const size_t slash = token.find('/');
    if (slash != std::string_view::npos) {
      const double den = parse_number(token.substr(slash + 1));
      if (den == 0.0) throw BadArguments(fmt::format("zero denominator in '{}'", token));
      raw.push_back(parse_number(token.substr(0, slash)) / den);
      exact.push_back(true);
    } else {
      raw.push_back(parse_number(token));
      exact.push_back(false);
    }
  }
  if (normalize) {
    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (!(sum > 0.0)) throw NormalizationError("coefficients sum to zero");
    for (double& x : raw) x /= sum;
  }
  if (snap_tol > 0.0) {
    std::vector<double> snapped = raw;
    bool all = true;
    for (size_t i = 0; i < raw.size() && all; ++i) {
      if (exact[i]) continue;
      const auto s = snap(raw[i], snap_tol);
      if (s) snapped[i] = *s;
      all = s.has_value();
    }
    if (all && std::abs(std::accumulate(snapped.begin(), snapped.end(), 0.0) - 1.0) <= 1e-12) {
      raw = std::move(snapped);
    }
  }
  return make_schmidt(raw, static_cast<int>(raw.size()));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  for (std::string_view token : split(text, ',')) {
    token = trim(token);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
      throw BadArguments(fmt::format("not an integer: '{}'", token));
    }
    values.push_back(v);
  }
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto fail = [&](const std::string& kind, const std::string& reason) {
    out << json{{"error", kind}, {"reason", reason}}.dump() << "\n";
    err << "error: " << reason << "\n";
    return kUsage;
  };

  Options o;
  CLI::App app{"Deterministic dense coding with non-maximally entangled states", "densecode"};
  app.set_version_flag("--version", DENSECODE_VERSION);
  app.require_subcommand(1);

  auto* construct = app.add_subcommand("construct", "Build an analytic orthogonal set");
  construct->add_option("kind", o.kind, "weyl | phases | d-plus-1 | grouped")
      ->required()
      ->check(CLI::IsMember({"weyl", "phases", "d-plus-1", "grouped"}));
  add_state_options(construct, o);
  add_construct_options(construct, o);
  construct->add_option("--out", o.out, "Output JSON file");
  construct->add_option("--seed", o.config.seed, "Seed for numerical phase solving");

  auto* verify = app.add_subcommand("verify", "Check an operator-set file");
  verify->add_option("file", o.set_file, "Operator-set JSON")->required();
  verify->add_option("--tol", o.tol, "Orthogonality tolerance");

  auto* search = app.add_subcommand("search", "Numerical feasibility / N_max search");
  add_state_options(search, o);
  search->add_option("--n", o.n, "Alphabet size to test");
  search->add_flag("--max", o.max, "Find N_max");
  search->add_option("--tol", o.config.ortho_tol, "Acceptance residual");
  search->add_option("--out", o.out, "Write the found set as JSON");
  add_search_options(search, o);

  auto* map = app.add_subcommand("map", "N_max region map over qutrit states");
  map->add_option("--resolution", o.resolution, "Lattice steps per edge (>= 8)");
  map->add_option("--out", o.out, "Output prefix (.csv, .svg, .manifest.json)")->required();
  map->add_option("--tol", o.config.ortho_tol, "Acceptance residual");
  add_search_options(map, o);

  auto* minent = app.add_subcommand("minent", "Minimal-entanglement thresholds");
  minent->add_option("--d", o.d, "Local dimension")->required();
  minent->add_option("--n-range", o.n_range, "Alphabet sizes a..b with d < a <= b <= 2d")
      ->required();
  minent->add_option("--out", o.out, "Output prefix (.table.csv, .figure.csv)");
  minent->add_option("--tol", o.config.ortho_tol, "Acceptance residual");
  add_search_options(minent, o);

  auto* sim = app.add_subcommand("simulate", "Encode and decode a message");
  sim->add_option("--set", o.set_file, "Operator-set JSON");
  sim->add_option("--construct", o.kind, "Build the set instead: weyl | phases | d-plus-1 | grouped")
      ->check(CLI::IsMember({"weyl", "phases", "d-plus-1", "grouped"}));
  add_state_options(sim, o);
  add_construct_options(sim, o);
  sim->add_option("--message", o.message, "Comma-separated letters")->required();
  sim->add_option("--shots", o.shots, "Sampled measurements per letter (0 = exact)")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", o.config.seed, "Sampling seed");
  sim->add_option("--tol", o.tol, "Orthogonality required of the set");

  try {
    o.config.seed = default_seed();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << DENSECODE_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail("Usage", e.what());
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  }

  try {
    o.config.validate();
    if (construct->parsed()) return cmd_construct(o, args, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (search->parsed()) return cmd_search(o, args, out);
    if (map->parsed()) return cmd_map(o, args, out);
    if (minent->parsed()) return cmd_minent(o, args, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    return fail("Usage", "no subcommand");
  } catch (const Error& e) {
    return fail(e.kind(), e.what());
  } catch (const json::exception& e) {
    return fail("ParseError", e.what());
  } catch (const std::exception& e) {
    return fail("IOError", e.what());
  }
}

}  // namespace densecode::cli
