// Copyright 2026 The cowqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cowkeyrate: key-rate scans over loss or distance, written as CSV.
//
// Exit status: 0 success, 1 configuration error, 2 some point failed.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cowqkd/scan.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitPointFailed = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cowqkd::ConfigError("cannot read config '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// "lo:hi"
std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    const double lo = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument("");
    const double hi = std::stod(b, &used);
    if (used != b.size() || !(hi > lo)) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw cowqkd::ConfigError("fit window '" + text + "' is not of the form lo:hi");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified key-rate scans for coherent one-way QKD"};
  std::string config_path, loss, distance, alpha, beta_mode, variant, error_mode, out, fit;
  double attenuation = 0, qber = 0, e_z = 0, e_x = 0, tol = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "JSON file mirroring the scan options");
  auto* loss_opt = app.add_option("--loss-db", loss, "loss grid a:b:step in dB");
  auto* dist_opt = app.add_option("--distance-km", distance, "distance grid a:b:step in km");
  app.add_option("--attenuation", attenuation, "fiber attenuation in dB/km (default 0.2)");
  app.add_option("--alpha", alpha, "pulse amplitude, a grid a:b:step, or auto");
  app.add_option("--beta-mode", beta_mode, "equal, half or grid");
  app.add_option("--variant", variant, "three or four");
  auto* qber_opt = app.add_option("--qber", qber, "error rate in both bases");
  auto* ez_opt = app.add_option("--e-z", e_z, "key-basis error rate");
  auto* ex_opt = app.add_option("--e-x", e_x, "monitoring error rate");
  app.add_option("--error-mode", error_mode, "worst-case or expected");
  app.add_option("--tol", tol, "SDP tolerance (default 1e-8)");
  app.add_option("--threads", threads, "worker threads, 0 for all cores");
  app.add_option("--seed", seed, "recorded seed; the scan is deterministic");
  app.add_option("--out", out, "CSV path (default stdout)");
  app.add_option("--fit", fit, "loss window lo:hi; prints the slope of log K vs log eta");
  loss_opt->excludes(dist_opt);
  qber_opt->excludes(ez_opt)->excludes(ex_opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  cowqkd::ScanSpec spec;
  std::pair<double, double> window{0.0, 0.0};
  try {
    std::string config_out;
    if (!config_path.empty()) spec = cowqkd::parse_scan_config(read_file(config_path), &config_out);
    if (out.empty()) out = config_out;
    if (*loss_opt) {
      spec.loss_db = cowqkd::parse_range(loss);
      spec.distance_km.clear();
    }
    if (*dist_opt) spec.distance_km = cowqkd::parse_range(distance);
    if (app.count("--attenuation")) spec.attenuation_db_per_km = attenuation;
    if (!alpha.empty()) {
      if (alpha == "auto") {
        spec.alpha.clear();
        spec.alpha_auto = true;
      } else {
        spec.alpha = cowqkd::parse_range(alpha);
        spec.alpha_auto = false;
      }
    }
    if (!beta_mode.empty()) spec.beta_mode = cowqkd::parse_beta_mode(beta_mode);
    if (!variant.empty()) {
      const cowqkd::Variant v = cowqkd::parse_variant(variant);
      if (v != spec.variant) spec.probs.clear();
      spec.variant = v;
    }
    if (*qber_opt) spec.e_z = spec.e_x = qber;
    if (*ez_opt) spec.e_z = e_z;
    if (*ex_opt) spec.e_x = e_x;
    if (!error_mode.empty()) spec.error_mode = cowqkd::parse_error_mode(error_mode);
    if (app.count("--tol")) spec.tol = tol;
    if (app.count("--threads")) spec.threads = threads;
    if (app.count("--seed")) spec.seed = seed;
    if (!fit.empty()) window = parse_window(fit);
    spec.validate();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "cowkeyrate: %s\n", e.what());
    return kExitConfig;
  }

  const std::vector<cowqkd::ScanRow> rows = cowqkd::scan(spec);
  if (out.empty()) {
    cowqkd::emit_csv(std::cout, rows);
    std::cout.flush();
  } else {
    std::ofstream f(out);
    if (!f) {
      std::fprintf(stderr, "cowkeyrate: cannot write '%s'\n", out.c_str());
      return kExitConfig;
    }
    cowqkd::emit_csv(f, rows);
  }

  const auto failed = std::count_if(rows.begin(), rows.end(),
                                    [](const cowqkd::ScanRow& r) { return !r.ok(); });
  if (!fit.empty()) {
    try {
      std::fprintf(stderr, "slope %.6f over loss [%g, %g] dB\n",
                   cowqkd::fit_scaling(rows, window.first, window.second), window.first,
                   window.second);
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "cowkeyrate: fit: %s\n", e.what());
    }
  }
  if (failed > 0) {
    std::fprintf(stderr, "cowkeyrate: %ld of %zu points failed\n", static_cast<long>(failed),
                 rows.size());
    return kExitPointFailed;
  }
  return 0;
}
