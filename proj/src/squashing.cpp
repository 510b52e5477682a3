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

#include "cowqkd/squashing.hpp"

#include <algorithm>
#include <stdexcept>

namespace cowqkd {

const Interval& SquashedBounds::at(int state, Basis b, Outcome o) const {
  const int oi = static_cast<int>(o);
  if (oi >= kSquashedOutcomes) throw std::out_of_range("not a squashed outcome");
  return states.at(state)[static_cast<int>(b)][oi];
}

Interval& SquashedBounds::at(int state, Basis b, Outcome o) {
  const int oi = static_cast<int>(o);
  if (oi >= kSquashedOutcomes) throw std::out_of_range("not a squashed outcome");
  return states.at(state)[static_cast<int>(b)][oi];
}

SquashedBounds squash_bounds(const StatTable& stats) {
  SquashedBounds out;
  out.states.resize(stats.states.size());
  for (const StateStats& s : stats.states) out.click_mass.push_back(s.click_mass);
  for (std::size_t i = 0; i < stats.states.size(); ++i) {
    const StateStats& s = stats.states[i];
    for (Basis b : {Basis::Z, Basis::X}) {
      const double dbl = s.double_click(b);
      for (int oi = 0; oi < kSquashedOutcomes; ++oi) {
        const auto o = static_cast<Outcome>(oi);
        Interval& iv = out.states[i][static_cast<int>(b)][oi];
        iv.lower = std::clamp(s.p(b, o), 0.0, 1.0);
        iv.upper = o == Outcome::none ? iv.lower
                                      : std::min(1.0, iv.lower + dbl);
      }
    }
  }
  return out;
}

}  // namespace cowqkd
