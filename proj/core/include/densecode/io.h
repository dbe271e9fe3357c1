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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "densecode/qstate.h"
#include "densecode/search.h"

namespace densecode::io {

// Shortest representation that round-trips a double ("%.17g" when needed).
std::string format_double(double value);

// Operator-set file layout:
//   {"d": int, "lambda": [float...],
//    "unitaries": [ [ [[re,im], ...row...], ...rows... ], ...members... ],
//    "residual": float, "meta": {...}}
nlohmann::json operator_set_to_json(const OperatorSet& set,
                                    const nlohmann::json& meta = nlohmann::json::object());

struct LoadedSet {
  OperatorSet set;
  nlohmann::json meta;
  double stored_residual = 0.0;
};

// Unitaries are loaded unchecked (verification judges them). A "lambda"
// that is not sorted descending is sorted and every member is conjugated by
// the same permutation, which leaves all weighted inner products unchanged.
//
// Throws ParseError (and the qstate errors for invalid content).
LoadedSet operator_set_from_json(const nlohmann::json& doc);

std::string dump_json(const nlohmann::json& doc);

// CSV with header `lambda0,lambda1,nmax`, one row per lattice node.
std::string region_map_csv(const RegionMap& map);

struct RegionCsvRow {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  int n_max = 0;
};
std::vector<RegionCsvRow> parse_region_csv(std::string_view csv);

// Heatmap of the region map in (lambda0, lambda1) coordinates with a legend
// and entropy contours (etrits) at the given levels.
std::string region_map_svg(const RegionMap& map, const std::vector<double>& contour_levels = {
                                                     0.2, 0.4, 0.6, 0.8, 1.0});

// Points (lambda0, lambda1) on the qutrit region where the base-3 entropy of
// (lambda0, lambda1, 1 - lambda0 - lambda1) equals `level`, ordered by lambda0.
std::vector<std::pair<double, double>> entropy_contour(double level, int samples = 200);

struct MinEntRow {
  int n = 0;
  int d = 0;
  double lambda0_min = 0.0;
  double entropy_min = 0.0;
  double capacity_bound = 0.0;
};
// `N,d,lambda0_min,entropy_min,capacity_bound`
std::string minent_table_csv(const std::vector<MinEntRow>& rows);
// `N,entropy_min,capacity_bound`
std::string minent_figure_csv(const std::vector<MinEntRow>& rows);
std::vector<MinEntRow> parse_minent_table_csv(std::string_view csv);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

// Output file written next to a run manifest.
struct ManifestOutput {
  std::filesystem::path path;
  std::string sha256;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json state = nullptr;
  std::string version;
  double duration_seconds = 0.0;
  std::vector<ManifestOutput> outputs;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

// `dir/stem.json` -> `dir/stem.manifest.json`
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

}  // namespace densecode::io
