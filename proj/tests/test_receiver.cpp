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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "cowqkd/fock.hpp"
#include "cowqkd/receiver.hpp"

using namespace cowqkd;

namespace {

ProtocolConfig make(double alpha, double beta, double eta) {
  ProtocolConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.eta = eta;
  return c;
}

double intensity(const ModeAmplitudes& m, int j) { return std::norm(m(j)); }

// Click statistics from the photon-level simulation of the receiver.
std::vector<double> oracle_clicks(int state, const ProtocolConfig& c) {
  const auto [b0, b1] = c.bin_amplitudes(state);
  std::vector<Complex> g(kModes, 0.0);
  g[0] = std::sqrt(c.eta) * b0;
  g[3] = std::sqrt(c.eta) * b1;
  return threshold_click_distribution(receiver_circuit(coherent_state(g, 8)));
}

std::map<std::pair<Basis, Outcome>, double> as_map(const std::vector<Assignment>& a) {
  std::map<std::pair<Basis, Outcome>, double> m;
  for (const Assignment& x : a) m[{x.basis, x.outcome}] += x.weight;
  return m;
}

}  // namespace

TEST_CASE("config validation") {
  ProtocolConfig c;
  CHECK_NOTHROW(c.validate());
  c.beta = 0.2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ProtocolConfig{};
  c.eta = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ProtocolConfig{};
  c.probs = {0.5, 0.5, 0.1};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ProtocolConfig{};
  c.variant = Variant::four_state_vacuum;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.probs = default_probs(c.variant);
  CHECK_NOTHROW(c.validate());
  c.e_x = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_variant("four") == Variant::four_state_vacuum);
  CHECK_THROWS_AS(parse_variant("five"), std::invalid_argument);
}

TEST_CASE("propagation") {
  const double a = 0.4, b = 0.2, eta = 0.3;
  const ProtocolConfig c = make(a, b, eta);
  SUBCASE("test state") {
    const ModeAmplitudes m = propagate(2, c);
    CHECK(intensity(m, 4) == doctest::Approx(eta * b * b / 2).epsilon(1e-14));
    CHECK(std::abs(m(5)) == 0.0);
  }
  SUBCASE("key state zero") {
    const ModeAmplitudes m = propagate(0, c);
    CHECK(intensity(m, 0) == doctest::Approx(eta * a * a / 2).epsilon(1e-14));
    CHECK(intensity(m, 4) == doctest::Approx(eta * a * a / 8).epsilon(1e-14));
    CHECK(intensity(m, 5) == doctest::Approx(eta * a * a / 8).epsilon(1e-14));
  }
  SUBCASE("total intensity") {
    for (int i = 0; i < 3; ++i) {
      const auto [b0, b1] = c.bin_amplitudes(i);
      CHECK(propagate(i, c).squaredNorm() == doctest::Approx(eta * (b0 * b0 + b1 * b1)).epsilon(1e-14));
    }
  }
  SUBCASE("invalid index") {
    CHECK_THROWS_AS(propagate(3, c), std::out_of_range);
  }
}

TEST_CASE("click statistics match the photon-level oracle") {
  for (int state = 0; state < 3; ++state) {
    const ProtocolConfig c = make(0.5, 0.25, 0.1);
    const ClickDistribution analytic = click_pattern_distribution(propagate(state, c));
    const std::vector<double> oracle = oracle_clicks(state, c);
    double worst = 0.0;
    for (int p = 0; p < kPatterns; ++p) worst = std::max(worst, std::abs(analytic[p] - oracle[p]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("click pattern product form") {
  ModeAmplitudes m = ModeAmplitudes::Zero();
  CHECK(click_pattern_distribution(m)[0] == 1.0);
  m(3) = std::sqrt(std::log(2.0));
  const ClickDistribution p = click_pattern_distribution(m);
  CHECK(p[1u << 3] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("classification") {
  auto m = as_map(classify(0));
  CHECK(m.size() == 2);
  CHECK(m[{Basis::Z, Outcome::none}] == 0.5);
  CHECK(m[{Basis::X, Outcome::none}] == 0.5);

  m = as_map(classify(1u << 0));
  CHECK(m.size() == 1);
  CHECK(m[{Basis::Z, Outcome::zero}] == 1.0);

  m = as_map(classify((1u << 0) | (1u << 3)));
  CHECK(m[{Basis::Z, Outcome::double_click}] == 1.0);

  m = as_map(classify((1u << 0) | (1u << 4)));
  CHECK(m[{Basis::Z, Outcome::zero}] == 0.5);
  CHECK(m[{Basis::X, Outcome::zero}] == 0.5);

  const std::pair<int, Outcome> singles[] = {
      {3, Outcome::one},          {6, Outcome::inconclusive}, {5, Outcome::one},
      {1, Outcome::inconclusive}, {2, Outcome::inconclusive}, {7, Outcome::inconclusive},
      {8, Outcome::inconclusive}, {4, Outcome::zero}};
  for (const auto& [det, o] : singles) {
    const auto a = classify(1u << det);
    REQUIRE(a.size() == 1);
    CHECK(a[0].outcome == o);
    CHECK(a[0].basis == (det % 3 == 0 ? Basis::Z : Basis::X));
  }

  for (std::uint32_t p = 0; p < kPatterns; ++p) {
    double w = 0.0;
    for (const Assignment& a : classify(p)) w += a.weight;
    CHECK(w == 1.0);
  }
}

TEST_CASE("noise model") {
  ProtocolConfig c = make(0.05, 0.025, 1.0);
  for (int i = 0; i < 3; ++i) {
    const ModeAmplitudes m = propagate(i, c);
    CHECK((apply_noise(m, c) - m).norm() == 0.0);
  }
  c.e_z = 0.02;
  c.e_x = 0.03;
  SUBCASE("test-state contrast equals the error rate") {
    const ModeAmplitudes m = apply_noise(propagate(2, c), c);
    CHECK(intensity(m, 5) / (intensity(m, 4) + intensity(m, 5)) == doctest::Approx(0.03).epsilon(1e-12));
  }
  SUBCASE("intensity is preserved") {
    for (int i = 0; i < 3; ++i) {
      CHECK(apply_noise(propagate(i, c), c).squaredNorm() ==
            doctest::Approx(propagate(i, c).squaredNorm()).epsilon(1e-14));
    }
  }
  SUBCASE("conditional error rates in the single-photon limit") {
    for (double alpha : {0.01, 0.05, 0.1}) {
      c.alpha = alpha;
      c.beta = alpha / 2;
      const ObservedQber q = observed_qber(c, expected_statistics(c));
      // Multi-photon corrections enter at order alpha^2.
      CHECK(std::abs(q.e_z - c.e_z) < 0.01 * alpha * alpha);
      CHECK(std::abs(q.e_x - c.e_x) < 0.01 * alpha * alpha);
    }
  }
}

TEST_CASE("expected statistics") {
  SUBCASE("rows sum to one") {
    for (Variant v : {Variant::three_state, Variant::four_state_vacuum}) {
      ProtocolConfig c = make(0.5, 0.3, 0.7);
      c.variant = v;
      c.probs = default_probs(v);
      c.e_z = 0.05;
      const StatTable t = expected_statistics(c);
      CHECK(static_cast<int>(t.states.size()) == c.state_count());
      for (const StateStats& s : t.states) {
        CHECK(std::abs(s.total() - 1.0) < 1e-10);
        for (const auto& row : s.prob)
          for (double p : row) CHECK((p >= 0.0 && p <= 1.0));
      }
    }
  }
  SUBCASE("no light") {
    const StatTable t = expected_statistics(make(0.2, 0.1, 1e-12));
    for (const StateStats& s : t.states) {
      CHECK(s.p(Basis::Z, Outcome::none) == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(s.p(Basis::X, Outcome::none) == doctest::Approx(0.5).epsilon(1e-10));
    }
  }
  SUBCASE("destructive port of the test state") {
    const StatTable t = expected_statistics(make(0.4, 0.2, 0.5));
    CHECK(t[2].p(Basis::X, Outcome::one) == 0.0);
    CHECK(t[2].p(Basis::X, Outcome::zero) > 0.0);
  }
  SUBCASE("monitoring line sees half the conclusive rate") {
    const StatTable t = expected_statistics(make(0.01, 0.005, 1.0));
    for (int i = 0; i < 2; ++i) {
      const double z = t[i].p(Basis::Z, Outcome::zero) + t[i].p(Basis::Z, Outcome::one);
      const double x = t[i].p(Basis::X, Outcome::zero) + t[i].p(Basis::X, Outcome::one);
      CHECK(x / z == doctest::Approx(0.5).epsilon(1e-3));
    }
  }
  SUBCASE("double clicks vanish faster than single clicks") {
    double last = 1.0;
    for (double eta = 1.0; eta > 0.09; eta /= 1.5) {
      const StatTable t = expected_statistics(make(0.5, 0.25, eta));
      double single = 0.0, dbl = 0.0;
      for (Basis b : {Basis::Z, Basis::X}) {
        dbl += t[0].double_click(b);
        for (Outcome o : {Outcome::zero, Outcome::one, Outcome::inconclusive}) single += t[0].single_click(b, o);
      }
      const double ratio = dbl / single;
      CHECK(ratio < last);
      last = ratio;
    }
  }
  SUBCASE("click mass") {
    const StatTable t = expected_statistics(make(0.3, 0.1, 0.2));
    for (const StateStats& s : t.states) {
      CHECK(s.click_mass == doctest::Approx(1.0 - s.p(Basis::Z, Outcome::none) - s.p(Basis::X, Outcome::none)).epsilon(1e-12));
    }
  }
  SUBCASE("perfect visibility without noise") {
    const ProtocolConfig c = make(0.3, 0.15, 0.4);
    CHECK(observed_qber(c, expected_statistics(c)).e_x == 0.0);
  }
}
