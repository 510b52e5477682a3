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

#ifndef COWQKD_SQUASHING_HPP
#define COWQKD_SQUASHING_HPP

#include <array>
#include <vector>

#include "cowqkd/receiver.hpp"

namespace cowqkd {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x, double slack = 0.0) const {
    return x >= lower - slack && x <= upper + slack;
  }
};

/// Outcomes of the virtual single-photon measurement: zero, one, none and
/// inconclusive (the first four values of Outcome).
constexpr int kSquashedOutcomes = 4;

/// Two-sided bounds on the joint probability P(basis, outcome | state) of
/// the virtual qubit measurement.
struct SquashedBounds {
  using PerState =
      std::array<std::array<Interval, kSquashedOutcomes>, kBases>;
  std::vector<PerState> states;
  /// Total click probability per state; the no-click mass is exactly
  /// 1 - click_mass, split evenly between the two bases.
  std::vector<double> click_mass;

  int state_count() const { return static_cast<int>(states.size()); }
  const Interval& at(int state, Basis b, Outcome o) const;
  Interval& at(int state, Basis b, Outcome o);
};

/// lower = single-click mass of the outcome (the no-click mass for none),
/// upper = lower plus the double-click mass of the basis. No-click events
/// carry no ambiguity, so the none interval has zero width.
SquashedBounds squash_bounds(const StatTable& stats);

}  // namespace cowqkd

#endif  // COWQKD_SQUASHING_HPP
