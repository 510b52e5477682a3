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

#include "cowqkd/receiver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cowqkd {
namespace {

constexpr std::uint32_t kZMask = (1u << 0) | (1u << 3) | (1u << 6);
constexpr std::uint32_t kXMask = (1u << 1) | (1u << 2) | (1u << 4) |
                                 (1u << 5) | (1u << 7) | (1u << 8);

Outcome single_outcome(int detector) {
  switch (detector) {
    case 0: return Outcome::zero;
    case 3: return Outcome::one;
    case 4: return Outcome::zero;
    case 5: return Outcome::one;
    default: return Outcome::inconclusive;  // C6 in Z; C1, C2, C7, C8 in X
  }
}

void assign_within(std::uint32_t clicks, Basis basis, double weight,
                   std::vector<Assignment>& out) {
  if (std::popcount(clicks) >= 2) {
    out.push_back({basis, Outcome::double_click, weight});
  } else {
    out.push_back({basis, single_outcome(std::countr_zero(clicks)), weight});
  }
}

// Rescales the contrast of an intensity pair, keeping its sum.
void mix_pair(ModeAmplitudes& m, int a, int b, double error) {
  const double ia = std::norm(m(a));
  const double ib = std::norm(m(b));
  const double sum = ia + ib;
  if (sum <= 0.0 || error == 0.0) return;
  const double visibility = 1.0 - 2.0 * error;
  const double contrast = (ia - ib) / sum;
  const double na = 0.5 * sum * (1.0 + visibility * contrast);
  const double nb = 0.5 * sum * (1.0 - visibility * contrast);
  // Keep each mode's phase; an empty mode borrows the partner's phase.
  auto phase = [&](int self, int other) {
    if (std::abs(m(self)) > 0) return m(self) / std::abs(m(self));
    return m(other) / std::abs(m(other));
  };
  const std::complex<double> pa = phase(a, b);
  const std::complex<double> pb = phase(b, a);
  m(a) = pa * std::sqrt(std::max(na, 0.0));
  m(b) = pb * std::sqrt(std::max(nb, 0.0));
}

}  // namespace

std::string to_string(Variant v) {
  return v == Variant::three_state ? "three" : "four";
}

Variant parse_variant(const std::string& text) {
  if (text == "three" || text == "three-state") return Variant::three_state;
  if (text == "four" || text == "four-state" || text == "four-state-vacuum") {
    return Variant::four_state_vacuum;
  }
  throw std::invalid_argument("unknown variant '" + text + "'");
}

std::vector<double> default_probs(Variant v) {
  if (v == Variant::three_state) return {0.495, 0.495, 0.01};
  return {0.495, 0.495, 0.005, 0.005};
}

void ProtocolConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(beta >= 0.0 && beta <= alpha)) {
    throw std::invalid_argument("beta must lie in [0, alpha]");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
  if (!(e_z >= 0.0 && e_z < 0.5) || !(e_x >= 0.0 && e_x < 0.5)) {
    throw std::invalid_argument("error rates must lie in [0, 0.5)");
  }
  if (static_cast<int>(probs.size()) != state_count()) {
    throw std::invalid_argument("expected " + std::to_string(state_count()) +
                                " preparation probabilities");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("preparation probabilities must sum to 1");
  }
}

std::array<double, 2> ProtocolConfig::bin_amplitudes(int state_index) const {
  switch (state_index) {
    case 0: return {alpha, 0.0};
    case 1: return {0.0, alpha};
    case 2: return {beta, beta};
    case 3:
      if (variant == Variant::four_state_vacuum) return {0.0, 0.0};
      break;
    default: break;
  }
  throw std::out_of_range("invalid prepared-state index " +
                          std::to_string(state_index));
}

const char* to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::zero: return "0";
    case Outcome::one: return "1";
    case Outcome::none: return "none";
    case Outcome::inconclusive: return "perp";
    case Outcome::double_click: return "d";
  }
  return "?";
}

ModeAmplitudes propagate(int state_index, const ProtocolConfig& config) {
  const auto [bin0, bin1] = config.bin_amplitudes(state_index);
  const double mu0 = std::sqrt(config.eta) * bin0;
  const double mu1 = std::sqrt(config.eta) * bin1;
  const double r2 = std::sqrt(2.0);
  const double r8 = 2.0 * r2;
  ModeAmplitudes m;
  m(0) = mu0 / r2;
  m(3) = mu1 / r2;
  m(6) = 0.0;
  // Monitoring line: only bin c1 interferes the two pulses.
  m(1) = mu0 / r8;
  m(2) = -mu0 / r8;
  m(4) = (mu0 + mu1) / r8;
  m(5) = (mu0 - mu1) / r8;
  m(7) = mu1 / r8;
  m(8) = mu1 / r8;
  return m;
}

ModeAmplitudes apply_noise(const ModeAmplitudes& m,
                           const ProtocolConfig& config) {
  if (!(config.e_z >= 0.0 && config.e_z < 0.5) ||
      !(config.e_x >= 0.0 && config.e_x < 0.5)) {
    throw std::invalid_argument("error rates must lie in [0, 0.5)");
  }
  ModeAmplitudes out = m;
  mix_pair(out, 0, 3, config.e_z);
  mix_pair(out, 4, 5, config.e_x);
  return out;
}

ClickDistribution click_pattern_distribution(const ModeAmplitudes& m) {
  std::array<double, kModes> click{};
  std::array<double, kModes> dark{};
  for (int j = 0; j < kModes; ++j) {
    const double mean = std::norm(m(j));
    click[j] = -std::expm1(-mean);
    dark[j] = std::exp(-mean);
  }
  ClickDistribution dist{};
  for (std::uint32_t pattern = 0; pattern < kPatterns; ++pattern) {
    double p = 1.0;
    for (int j = 0; j < kModes; ++j) {
      p *= (pattern >> j) & 1u ? click[j] : dark[j];
    }
    dist[pattern] = p;
  }
  return dist;
}

std::vector<Assignment> classify(std::uint32_t pattern) {
  std::vector<Assignment> out;
  const std::uint32_t z = pattern & kZMask;
  const std::uint32_t x = pattern & kXMask;
  if (z == 0 && x == 0) {
    out.push_back({Basis::Z, Outcome::none, 0.5});
    out.push_back({Basis::X, Outcome::none, 0.5});
    return out;
  }
  const double weight = (z != 0 && x != 0) ? 0.5 : 1.0;
  if (z != 0) assign_within(z, Basis::Z, weight, out);
  if (x != 0) assign_within(x, Basis::X, weight, out);
  return out;
}

double StateStats::total() const {
  double s = 0.0;
  for (const auto& row : prob) s += std::accumulate(row.begin(), row.end(), 0.0);
  return s;
}

StateStats classify_distribution(const ModeAmplitudes& m) {
  const ClickDistribution dist = click_pattern_distribution(m);
  StateStats stats;
  for (std::uint32_t pattern = 0; pattern < kPatterns; ++pattern) {
    if (dist[pattern] == 0.0) continue;
    for (const Assignment& a : classify(pattern)) {
      stats.prob[static_cast<int>(a.basis)][static_cast<int>(a.outcome)] +=
          a.weight * dist[pattern];
    }
  }
  double mean = 0.0;
  for (int j = 0; j < kModes; ++j) mean += std::norm(m(j));
  stats.click_mass = -std::expm1(-mean);
  return stats;
}

StatTable expected_statistics(const ProtocolConfig& config) {
  config.validate();
  StatTable table;
  table.states.reserve(config.state_count());
  for (int i = 0; i < config.state_count(); ++i) {
    table.states.push_back(
        classify_distribution(apply_noise(propagate(i, config), config)));
  }
  return table;
}

ObservedQber observed_qber(const ProtocolConfig& config,
                           const StatTable& table) {
  const double p0 = config.probs.at(0);
  const double p1 = config.probs.at(1);
  const auto& s0 = table[0];
  const auto& s1 = table[1];
  const double z_err = p0 * s0.p(Basis::Z, Outcome::one) +
                       p1 * s1.p(Basis::Z, Outcome::zero);
  const double z_det =
      p0 * (s0.p(Basis::Z, Outcome::zero) + s0.p(Basis::Z, Outcome::one)) +
      p1 * (s1.p(Basis::Z, Outcome::zero) + s1.p(Basis::Z, Outcome::one));
  const auto& s2 = table[2];
  const double x_det =
      s2.p(Basis::X, Outcome::zero) + s2.p(Basis::X, Outcome::one);
  return {z_det > 0 ? z_err / z_det : 0.0,
          x_det > 0 ? s2.p(Basis::X, Outcome::one) / x_det : 0.0};
}

}  // namespace cowqkd
