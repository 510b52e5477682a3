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
#include <sstream>
#include <string>
#include <vector>

#include "cowqkd/scan.hpp"

using namespace cowqkd;

namespace {

ScanSpec fixed(std::vector<double> loss, double alpha) {
  ScanSpec s;
  s.loss_db = std::move(loss);
  s.alpha = {alpha};
  s.alpha_auto = false;
  s.threads = 1;
  return s;
}

ScanRow synthetic(double loss, double k) {
  ScanRow r;
  r.loss_db = loss;
  r.eta = loss_to_eta(loss);
  r.key_rate = k;
  r.status = "optimal";
  return r;
}

}  // namespace

TEST_CASE("loss conversion") {
  CHECK(loss_to_eta(0.0) == 1.0);
  CHECK(loss_to_eta(10.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(loss_to_eta(30.0) == doctest::Approx(1e-3).epsilon(1e-15));
  ScanSpec s;
  s.distance_km = {0.0, 50.0, 100.0};
  const auto l = s.losses();
  REQUIRE(l.size() == 3);
  CHECK(l[1] == doctest::Approx(10.0));
  CHECK(l[2] == doctest::Approx(20.0));
  s.attenuation_db_per_km = 0.16;
  CHECK(s.losses()[2] == doctest::Approx(16.0));
}

TEST_CASE("range parsing") {
  CHECK(parse_range("5") == std::vector<double>{5.0});
  const auto r = parse_range("0:10:2.5");
  REQUIRE(r.size() == 5);
  CHECK(r.back() == doctest::Approx(10.0));
  CHECK(parse_range("0:0.3:0.1").size() == 4);
  CHECK(parse_range("0:1:0.3").size() == 4);
  for (const char* bad : {"", "a:b:c", "0:1", "10:0:1", "0:1:0", "0:1:-1", "1:2:3:4", "1x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_range(bad), std::invalid_argument);
  }
}

TEST_CASE("scaling fit") {
  std::vector<ScanRow> quad, lin;
  for (double l = 20.0; l <= 30.0 + 1e-9; l += 1.0) {
    quad.push_back(synthetic(l, 0.3 * std::pow(loss_to_eta(l), 2)));
    lin.push_back(synthetic(l, 0.3 * loss_to_eta(l)));
  }
  CHECK(fit_scaling(quad, 20, 30) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fit_scaling(lin, 20, 30) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(fit_scaling(quad, 20, 22), std::invalid_argument);
  quad[3].key_rate = 0.0;
  CHECK_THROWS_AS(fit_scaling(quad, 20, 30), std::invalid_argument);
}

TEST_CASE("csv") {
  std::vector<ScanRow> rows;
  ScanRow a = synthetic(12.5, 1.0 / 3.0);
  a.alpha = 0.123456789012345;
  a.beta = a.alpha / 2;
  a.e_phase = 0.0421;
  a.plob = plob_bound(a.eta);
  a.gap = -3.2e-9;
  rows.push_back(a);
  ScanRow b;
  b.gap = std::numeric_limits<double>::infinity();
  rows.push_back(b);

  const std::string text = emit_csv(rows);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(std::string(kCsvHeader) == "loss_db,eta,alpha,beta,e_phase,e_z,p_det_z,key_rate,plob,gap,status");
  std::ostringstream os;
  emit_csv(os, rows);
  CHECK(os.str() == text);

  const auto back = parse_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(emit_csv(back) == text);
  CHECK(back[0].alpha == doctest::Approx(a.alpha).epsilon(5e-12));
  CHECK(back[0].key_rate == doctest::Approx(a.key_rate).epsilon(5e-12));
  CHECK(back[0].status == "optimal");
  CHECK(back[1].status == "error");
  CHECK(std::isinf(back[1].gap));
  // A second round trip is exact.
  CHECK(parse_csv(emit_csv(back)) == back);

  CHECK_THROWS_AS(parse_csv("bad,header\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\nx,1,1,1,1,1,1,1,1,1,optimal\n"),
                  std::invalid_argument);
}

TEST_CASE("json config") {
  std::string out;
  const ScanSpec s = parse_scan_config(R"({
      "loss_db": "0:20:5", "alpha": 0.2, "beta_mode": "grid", "variant": "four",
      "qber": 0.01, "tol": 1e-7, "seed": 42, "threads": 2, "out": "x.csv",
      "error_mode": "expected"})",
                                       &out);
  CHECK(s.loss_db.size() == 5);
  CHECK(s.alpha == std::vector<double>{0.2});
  CHECK_FALSE(s.alpha_auto);
  CHECK(s.beta_mode == BetaMode::grid);
  CHECK(s.variant == Variant::four_state_vacuum);
  CHECK(s.e_z == 0.01);
  CHECK(s.e_x == 0.01);
  CHECK(s.seed == 42);
  CHECK(s.error_mode == ErrorMode::expected);
  CHECK(out == "x.csv");
  CHECK_NOTHROW(s.validate());

  const ScanSpec t = parse_scan_config(R"({"loss_db": [1, 2, 3], "alpha": "auto", "e_x": 0.02})");
  CHECK(t.alpha_auto);
  CHECK(t.e_x == 0.02);
  CHECK(t.e_z == 0.0);
  CHECK(parse_scan_config(R"({"alpha": {"start": 0.1, "stop": 0.3, "step": 0.1}})").alpha.size() == 3);

  for (const char* bad : {"[1]", "{", R"({"colour": 1})", R"({"qber": 0.01, "e_z": 0.02})",
                          R"({"beta_mode": "wide"})", R"({"tol": "small"})",
                          R"({"variant": "five"})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_scan_config(bad), ConfigError);
  }
}

TEST_CASE("spec validation") {
  ScanSpec s = fixed({0, 10}, 0.2);
  CHECK_NOTHROW(s.validate());
  s.loss_db = {};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = fixed({10, 0}, 0.2);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = fixed({0, 10}, -0.2);
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = fixed({0, 10}, 0.2);
  s.e_z = 0.7;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = fixed({0, 10}, 0.2);
  s.alpha_auto = true;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = fixed({0, 10}, 0.2);
  s.probs = {0.5, 0.5};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  CHECK(beta_ratios(BetaMode::grid).size() == 4);
  CHECK(parse_beta_mode("half") == BetaMode::half);
  CHECK(to_string(BetaMode::equal) == "equal");
  CHECK(parse_error_mode("worst-case") == ErrorMode::worst_case);
}

TEST_CASE("scans") {
  ScanSpec s = fixed({0, 5, 10, 15, 20}, 0.2);
  s.e_z = s.e_x = 0.01;
  const auto rows = scan(s);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].key_rate > rows[1].key_rate);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].ok());
    CHECK(rows[i].loss_db == s.loss_db[i]);
    CHECK(rows[i].key_rate <= rows[i].plob);
    CHECK(rows[i].beta == doctest::Approx(0.1));
    CHECK(std::abs(rows[i].gap) < 1e-6);
    if (i > 0) CHECK(rows[i].key_rate <= rows[i - 1].key_rate);
  }
  // Same spec, different worker counts: identical output.
  ScanSpec p = s;
  p.threads = 3;
  CHECK(emit_csv(scan(p)) == emit_csv(rows));
  CHECK(scan(s) == rows);

  ScanSpec g = s;
  g.beta_mode = BetaMode::grid;
  const auto grid = scan(g);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(grid[i].key_rate >= rows[i].key_rate);

  // Several alphas: rows ordered loss-major.
  ScanSpec m = fixed({0, 10}, 0.1);
  m.alpha = {0.1, 0.2};
  const auto mr = scan(m);
  REQUIRE(mr.size() == 4);
  CHECK(mr[0].loss_db == 0.0);
  CHECK(mr[1].alpha == 0.2);
  CHECK(mr[2].loss_db == 10.0);
}

TEST_CASE("alpha optimization") {
  ScanSpec s;
  s.loss_db = {20};
  const ScanRow best = optimize_alpha(s, 20);
  REQUIRE(best.ok());
  CHECK(best.alpha >= kAlphaMin);
  CHECK(best.alpha <= kAlphaMax);
  for (double a : {0.5 * best.alpha, 2.0 * best.alpha}) {
    const ScanRow r = evaluate_alpha(s, 20, a);
    CHECK(r.key_rate <= best.key_rate * (1 + 1e-9));
  }
}
