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

#ifndef COWQKD_RECEIVER_HPP
#define COWQKD_RECEIVER_HPP

// Closed-form model of the coherent one-way transmitter, channel and
// passive receiver.
//
// Detector modes: d_{3t + s} is spatial output s in {a0, b0, b1} during time
// bin c_t. a0 is the direct (Z) line, b0/b1 the two monitoring (X) outputs.
// Alice prepares
//   phi0 = |alpha>|0>|0>,  phi1 = |0>|alpha>|0>,  phi2 = |beta>|beta>|0>
// on bins c0, c1, c2, plus phi3 = vacuum in the four-state variant.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cowqkd {

enum class Variant { three_state, four_state_vacuum };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

struct ProtocolConfig {
  double alpha = 0.1;
  double beta = 0.05;
  /// p0, p1, p2 (and p3 for the four-state variant).
  std::vector<double> probs = {0.495, 0.495, 0.01};
  double eta = 1.0;
  double e_z = 0.0;
  double e_x = 0.0;
  Variant variant = Variant::three_state;

  int state_count() const {
    return variant == Variant::three_state ? 3 : 4;
  }
  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
  /// Bin amplitudes (c0, c1) of prepared state i before the channel.
  std::array<double, 2> bin_amplitudes(int state_index) const;
};

/// Default preparation probabilities for a variant.
std::vector<double> default_probs(Variant v);

constexpr int kModes = 9;
constexpr int kPatterns = 1 << kModes;

using ModeAmplitudes = Eigen::Matrix<std::complex<double>, kModes, 1>;
using ClickDistribution = std::array<double, kPatterns>;

enum class Basis : int { Z = 0, X = 1 };
/// none is the no-click outcome, inconclusive the monitoring side bins,
/// double_click two or more distinct clicks in the assigned basis.
enum class Outcome : int {
  zero = 0,
  one = 1,
  none = 2,
  inconclusive = 3,
  double_click = 4
};
constexpr int kBases = 2;
constexpr int kOutcomes = 5;

const char* to_string(Basis b);
const char* to_string(Outcome o);

struct Assignment {
  Basis basis;
  Outcome outcome;
  double weight;
};

/// Mode amplitudes at the detectors for prepared state `state_index`,
/// after a pure-loss channel of transmittance eta. Noise is not applied.
ModeAmplitudes propagate(int state_index, const ProtocolConfig& config);

/// Intensity-mixing noise. The Z pair (d0, d3) and the conclusive X pair
/// (d4, d5) keep their summed intensity while their contrast is scaled by
/// 1 - 2 e_z and 1 - 2 e_x respectively. Phases are kept.
ModeAmplitudes apply_noise(const ModeAmplitudes& m,
                           const ProtocolConfig& config);

/// Product-form threshold statistics of a product coherent state.
ClickDistribution click_pattern_distribution(const ModeAmplitudes& m);

/// Weighted (basis, outcome) assignment for a click pattern (bit j set when
/// detector j clicked).
std::vector<Assignment> classify(std::uint32_t pattern);

/// Classified detection statistics of one prepared state.
struct StateStats {
  /// prob[basis][outcome], joint over basis and outcome.
  std::array<std::array<double, kOutcomes>, kBases> prob{};
  /// 1 - P(no detector clicks), evaluated without cancellation.
  double click_mass = 0.0;

  double p(Basis b, Outcome o) const {
    return prob[static_cast<int>(b)][static_cast<int>(o)];
  }
  /// Mass of single-click events with this outcome (o in {0, 1, perp}).
  double single_click(Basis b, Outcome o) const { return p(b, o); }
  double double_click(Basis b) const { return p(b, Outcome::double_click); }
  double total() const;
};

struct StatTable {
  std::vector<StateStats> states;
  const StateStats& operator[](int i) const { return states.at(i); }
};

StatTable expected_statistics(const ProtocolConfig& config);

/// Statistics of one state from its (noisy) detector amplitudes.
StateStats classify_distribution(const ModeAmplitudes& m);

/// Observed conditional error rates: Z errors on the key states, X errors on
/// the test state phi2.
struct ObservedQber {
  double e_z;
  double e_x;
};
ObservedQber observed_qber(const ProtocolConfig& config,
                           const StatTable& table);

}  // namespace cowqkd

#endif  // COWQKD_RECEIVER_HPP
