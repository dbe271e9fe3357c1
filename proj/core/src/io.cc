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

#include "densecode/io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "densecode/errors.h"

namespace densecode::io {

namespace {

using nlohmann::json;

double to_double(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(fmt::format("not a number: '{}'", field));
  }
  return value;
}

int to_int(std::string_view field) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(fmt::format("not an integer: '{}'", field));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<std::vector<std::string_view>> csv_rows(std::string_view csv,
                                                    std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  bool first = true;
  for (std::string_view line : split(csv, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (first) {
      if (line != header) throw ParseError(fmt::format("expected CSV header '{}'", header));
      first = false;
      continue;
    }
    rows.push_back(split(line, ','));
  }
  if (first) throw ParseError("empty CSV");
  return rows;
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ParseError(fmt::format("missing field '{}'", key));
  }
  return doc.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(fmt::format("{} must be a number", what));
  return v.get<double>();
}

const char* kPalette[] = {"#f7fbff", "#c6dbef", "#6baed6", "#2171b5",
                          "#fdae6b", "#e6550d", "#a63603"};

const char* color_for(int n_max) {
  const int idx = std::clamp(n_max - 3, 0, 6);
  return kPalette[idx];
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return fmt::format("{:.17g}", value);
  return std::string(buf, ptr);
}

json operator_set_to_json(const OperatorSet& set, const json& meta) {
  json doc;
  doc["d"] = set.dim();
  doc["lambda"] = set.state().lambda();
  json members = json::array();
  for (const Unitary& u : set.unitaries()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < u.matrix().rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < u.matrix().cols(); ++c) {
        row.push_back({u.matrix()(r, c).real(), u.matrix()(r, c).imag()});
      }
      rows.push_back(std::move(row));
    }
    members.push_back(std::move(rows));
  }
  doc["unitaries"] = std::move(members);
  doc["residual"] = set.residual();
  doc["meta"] = meta;
  return doc;
}

LoadedSet operator_set_from_json(const json& doc) {
  const json& dv = require(doc, "d");
  if (!dv.is_number_integer()) throw ParseError("d must be an integer");
  const int d = dv.get<int>();
  if (d < 2) throw ParseError(fmt::format("d must be >= 2, got {}", d));

  const json& lv = require(doc, "lambda");
  if (!lv.is_array() || static_cast<int>(lv.size()) != d) {
    throw ParseError(fmt::format("lambda must be an array of {} numbers", d));
  }
  std::vector<double> raw;
  for (const json& x : lv) raw.push_back(number(x, "lambda entry"));

  // Stable descending order of the file's lambda; perm[new] = old.
  std::vector<int> perm(static_cast<size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return raw[a] > raw[b]; });
  const bool identity_perm = std::is_sorted(perm.begin(), perm.end());

  const json& uv = require(doc, "unitaries");
  if (!uv.is_array() || uv.empty()) throw ParseError("unitaries must be a non-empty array");
  std::vector<Unitary> members;
  for (const json& mat : uv) {
    if (!mat.is_array() || static_cast<int>(mat.size()) != d) {
      throw ParseError(fmt::format("each unitary must have {} rows", d));
    }
    CMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
      const json& row = mat[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != d) {
        throw ParseError(fmt::format("each row must have {} entries", d));
      }
      for (int c = 0; c < d; ++c) {
        const json& z = row[static_cast<size_t>(c)];
        if (!z.is_array() || z.size() != 2) throw ParseError("entries must be [re, im] pairs");
        m(r, c) = Complex(number(z[0], "real part"), number(z[1], "imaginary part"));
      }
    }
    if (!identity_perm) {
      CMatrix p(d, d);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) p(r, c) = m(perm[r], perm[c]);
      }
      m = std::move(p);
    }
    members.push_back(Unitary::unchecked(std::move(m)));
  }

  LoadedSet out{OperatorSet(make_schmidt(raw, d), std::move(members)),
                doc.contains("meta") ? doc.at("meta") : json::object(),
                doc.contains("residual") ? number(doc.at("residual"), "residual") : 0.0};
  return out;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::string region_map_csv(const RegionMap& map) {
  std::string out = "lambda0,lambda1,nmax\n";
  for (const RegionCell& c : map.cells) {
    out += fmt::format("{},{},{}\n", format_double(c.lambda0), format_double(c.lambda1), c.n_max);
  }
  return out;
}

std::vector<RegionCsvRow> parse_region_csv(std::string_view csv) {
  std::vector<RegionCsvRow> rows;
  for (const auto& f : csv_rows(csv, "lambda0,lambda1,nmax")) {
    if (f.size() != 3) throw ParseError("region CSV rows need 3 fields");
    rows.push_back({to_double(f[0]), to_double(f[1]), to_int(f[2])});
  }
  return rows;
}

std::vector<std::pair<double, double>> entropy_contour(double level, int samples) {
  std::vector<std::pair<double, double>> pts;
  auto s_at = [](double l0, double l1) {
    const std::vector<double> c{l0, l1, std::max(0.0, 1.0 - l0 - l1)};
    const double sum = c[0] + c[1] + c[2];
    const std::vector<double> n{c[0] / sum, c[1] / sum, c[2] / sum};
    return entropy(make_schmidt(n, 3), 3.0);
  };
  for (int k = 0; k <= samples; ++k) {
    const double l0 = 1.0 / 3.0 + (2.0 / 3.0) * k / samples;
    // On [lo, hi] the entropy decreases monotonically in lambda1.
    double lo = (1.0 - l0) / 2.0;
    double hi = std::min(l0, 1.0 - l0);
    if (hi < lo) continue;
    const double s_lo = s_at(l0, lo);
    const double s_hi = s_at(l0, hi);
    if (level > s_lo + 1e-12 || level < s_hi - 1e-12) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (s_at(l0, mid) > level ? lo : hi) = mid;
    }
    pts.emplace_back(l0, 0.5 * (lo + hi));
  }
  return pts;
}

std::string region_map_svg(const RegionMap& map, const std::vector<double>& contour_levels) {
  constexpr double kW = 720, kH = 560, kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto px = [&](double l0) { return kLeft + (l0 - 1.0 / 3.0) / (2.0 / 3.0) * pw; };
  auto py = [&](double l1) { return kTop + (1.0 - l1 / 0.5) * ph; };

  std::ostringstream svg;
  svg << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH, kW, kH);
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << fmt::format(
      "<text x=\"{}\" y=\"22\" font-size=\"15\">N_max over qutrit states (resolution {}, "
      "restarts {}, seed {})</text>\n",
      kLeft, map.resolution, map.config.restarts, map.config.seed);

  // One lattice parallelogram per node.
  const double r = map.resolution;
  const double ax = 1.0 / (6.0 * r), ay = 1.0 / (6.0 * r);
  const double bx = 2.0 / (3.0 * r), by = -1.0 / (3.0 * r);
  svg << "<g stroke=\"none\">\n";
  for (const RegionCell& c : map.cells) {
    const double cx[4] = {c.lambda0 - ax / 2 - bx / 2, c.lambda0 + ax / 2 - bx / 2,
                          c.lambda0 + ax / 2 + bx / 2, c.lambda0 - ax / 2 + bx / 2};
    const double cy[4] = {c.lambda1 - ay / 2 - by / 2, c.lambda1 + ay / 2 - by / 2,
                          c.lambda1 + ay / 2 + by / 2, c.lambda1 - ay / 2 + by / 2};
    svg << "<polygon points=\"";
    for (int k = 0; k < 4; ++k) svg << fmt::format("{:.2f},{:.2f} ", px(cx[k]), py(cy[k]));
    svg << fmt::format("\" fill=\"{}\"><title>lambda0={:.4f} lambda1={:.4f} N_max={}</title>"
                       "</polygon>\n",
                       color_for(c.n_max), c.lambda0, c.lambda1, c.n_max);
  }
  svg << "</g>\n";

  // Region outline (1/3,1/3) - (1/2,1/2) - (1,0).
  svg << fmt::format(
      "<polygon points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" fill=\"none\" "
      "stroke=\"black\" stroke-width=\"1.2\"/>\n",
      px(1.0 / 3.0), py(1.0 / 3.0), px(0.5), py(0.5), px(1.0), py(0.0));

  for (double level : contour_levels) {
    const auto pts = entropy_contour(level);
    if (pts.empty()) continue;
    if (pts.size() == 1) {
      svg << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"#444\"/>\n",
                         px(pts[0].first), py(pts[0].second));
    } else {
      svg << "<polyline fill=\"none\" stroke=\"#444\" stroke-dasharray=\"4 3\" points=\"";
      for (const auto& [l0, l1] : pts) svg << fmt::format("{:.2f},{:.2f} ", px(l0), py(l1));
      svg << "\"/>\n";
    }
    const auto& [l0, l1] = pts.back();
    svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"#444\">S={:.1f}</text>\n",
                       px(l0) + 4, py(l1) - 4, level);
  }

  // Axes.
  svg << fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kLeft, kTop + ph, kLeft + pw, kTop);
  for (int k = 0; k <= 4; ++k) {
    const double l0 = 1.0 / 3.0 + k / 6.0;
    const double l1 = k / 8.0;
    svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3f}</text>\n",
                       px(l0), kTop + ph + 18, l0);
    svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3f}</text>\n",
                       kLeft - 6, py(l1) + 4, l1);
  }
  svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">lambda0</text>\n",
                     kLeft + pw / 2, kH - 16);
  svg << fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" transform=\"rotate(-90 18 {:.2f})\" "
      "text-anchor=\"middle\">lambda1</text>\n",
      kTop + ph / 2, kTop + ph / 2);

  // Legend.
  const double lx = kW - kRight + 24;
  svg << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">N_max</text>\n", lx, kTop + 10);
  for (int n = 3; n <= 9; ++n) {
    const double y = kTop + 22 + (n - 3) * 22;
    svg << fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"16\" height=\"16\" fill=\"{}\" "
        "stroke=\"#888\"/>\n<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
        lx, y, color_for(n), lx + 24, y + 13, n);
  }
  svg << fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\">search failure, not proof</text>\n", lx,
      kTop + 22 + 7 * 22 + 12);
  svg << "</svg>\n";
  return svg.str();
}

std::string minent_table_csv(const std::vector<MinEntRow>& rows) {
  std::string out = "N,d,lambda0_min,entropy_min,capacity_bound\n";
  for (const MinEntRow& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", r.n, r.d, format_double(r.lambda0_min),
                       format_double(r.entropy_min), format_double(r.capacity_bound));
  }
  return out;
}

std::string minent_figure_csv(const std::vector<MinEntRow>& rows) {
  std::string out = "N,entropy_min,capacity_bound\n";
  for (const MinEntRow& r : rows) {
    out += fmt::format("{},{},{}\n", r.n, format_double(r.entropy_min),
                       format_double(r.capacity_bound));
  }
  return out;
}

std::vector<MinEntRow> parse_minent_table_csv(std::string_view csv) {
  std::vector<MinEntRow> rows;
  for (const auto& f : csv_rows(csv, "N,d,lambda0_min,entropy_min,capacity_bound")) {
    if (f.size() != 5) throw ParseError("minent CSV rows need 5 fields");
    rows.push_back({to_int(f[0]), to_int(f[1]), to_double(f[2]), to_double(f[3]),
                    to_double(f[4])});
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

json manifest_to_json(const RunManifest& m) {
  json outputs = json::array();
  for (const ManifestOutput& o : m.outputs) {
    outputs.push_back({{"path", o.path.string()}, {"sha256", o.sha256}});
  }
  return {{"command", m.command},
          {"argv", m.argv},
          {"config", m.config},
          {"state", m.state},
          {"version", m.version},
          {"duration_seconds", m.duration_seconds},
          {"outputs", outputs}};
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  std::filesystem::path p = output;
  p.replace_extension();
  p += ".manifest.json";
  return p;
}

}  // namespace densecode::io
