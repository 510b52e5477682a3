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

#ifndef COWQKD_SCAN_HPP
#define COWQKD_SCAN_HPP

// Key-rate scans over channel loss, intensity optimization and CSV I/O.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cowqkd/receiver.hpp"
#include "cowqkd/security.hpp"

namespace cowqkd {

/// Raised on an invalid scan specification or configuration file.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BetaMode {
  /// beta = alpha
  equal,
  /// beta = alpha / 2
  half,
  /// best of beta = alpha / {1, 2, 4, 8}
  grid
};

std::string to_string(BetaMode m);
BetaMode parse_beta_mode(const std::string& text);

/// "worst-case" or "expected".
ErrorMode parse_error_mode(const std::string& text);

/// Ratios beta / alpha tried by a beta mode.
std::vector<double> beta_ratios(BetaMode m);

constexpr double kAlphaMin = 1e-2;
constexpr double kAlphaMax = 1.5;

struct ScanSpec {
  /// Loss grid in dB. Ignored when distance_km is non-empty.
  std::vector<double> loss_db;
  std::vector<double> distance_km;
  double attenuation_db_per_km = 0.2;
  /// Empty together with alpha_auto = true means optimize alpha.
  std::vector<double> alpha;
  bool alpha_auto = true;
  BetaMode beta_mode = BetaMode::half;
  Variant variant = Variant::three_state;
  double e_z = 0.0;
  double e_x = 0.0;
  /// Empty: default_probs(variant).
  std::vector<double> probs;
  double tol = 1e-8;
  ErrorMode error_mode = ErrorMode::worst_case;
  /// Recorded for reproducibility; the scan itself draws no random numbers.
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 0;

  /// Throws ConfigError.
  void validate() const;
  /// The loss grid in dB, converted from distance when one is given.
  std::vector<double> losses() const;
  std::vector<double> preparation_probs() const;
};

/// Transmittance 10^(-loss / 10).
double loss_to_eta(double loss_db);

struct ScanRow {
  double loss_db = 0.0;
  double eta = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double e_phase = 1.0;
  double e_z = 0.5;
  double p_det_z = 0.0;
  double key_rate = 0.0;
  double plob = 0.0;
  double gap = 0.0;
  /// to_string(SdpStatus) of the point's SDP, or "error" when the point
  /// could not be set up.
  std::string status = "error";

  bool ok() const { return status == "optimal"; }
  bool operator==(const ScanRow&) const = default;
};

/// Key rate at one (loss, alpha, beta) point. Never throws on SDP trouble;
/// the row's status records it.
ScanRow evaluate_point(const ScanSpec& spec, double loss_db, double alpha,
                       double beta);

/// Best row over the beta ratios of the spec's beta mode at fixed alpha.
ScanRow evaluate_alpha(const ScanSpec& spec, double loss_db, double alpha);

/// Alpha in [kAlphaMin, kAlphaMax] maximizing the key rate: a coarse grid in
/// log alpha followed by golden-section refinement around its best point.
/// Only points with an optimal SDP are trusted.
ScanRow optimize_alpha(const ScanSpec& spec, double loss_db);

/// One row per loss value (alpha auto) or per (loss, alpha) pair, in grid
/// order. Points are evaluated in parallel.
std::vector<ScanRow> scan(const ScanSpec& spec);

/// Least-squares slope of log K against log eta over rows with loss in
/// [loss_lo, loss_hi]. Throws std::invalid_argument with fewer than five
/// rows in the window or a non-positive key rate among them.
double fit_scaling(const std::vector<ScanRow>& rows, double loss_lo, double loss_hi);

extern const char* const kCsvHeader;

/// Header line and one line per row, numbers with 12 significant digits.
std::string emit_csv(const std::vector<ScanRow>& rows);
void emit_csv(std::ostream& out, const std::vector<ScanRow>& rows);
/// Throws std::invalid_argument on a malformed document.
std::vector<ScanRow> parse_csv(const std::string& text);

/// "a:b:step" -> a, a + step, ... up to b (inclusive within rounding).
std::vector<double> parse_range(const std::string& text);

/// Spec from a JSON document. Keys mirror the command line: loss_db,
/// distance_km, attenuation_db_per_km, alpha, beta_mode, variant, qber,
/// e_z, e_x, probs, tol, seed, threads, error_mode, plus "out", which is
/// returned through `out_path` when given. Throws ConfigError.
ScanSpec parse_scan_config(const std::string& json_text, std::string* out_path = nullptr);

}  // namespace cowqkd

#endif  // COWQKD_SCAN_HPP
