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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cowqkd/combinatorics.hpp"
#include "identities.hpp"

using namespace cowqkd;

TEST_CASE("multinomial coefficients") {
  const int a[] = {2, 2};
  const int b[] = {1, 1, 1};
  const int c[] = {1, 0, 2};
  CHECK(multinomial(4, a) == 6);
  CHECK(multinomial(3, b) == 6);
  CHECK(multinomial(2, c) == 0);
  const int neg[] = {-1, 3};
  CHECK_THROWS_AS(multinomial(2, neg), std::invalid_argument);
  CHECK_THROWS_AS(multinomial(-1, a), std::invalid_argument);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 5) == 0);
  const int big[] = {10, 10, 10};
  CHECK(multinomial(30, big) == 5550996791340ull);
}

TEST_CASE("lines") {
  CHECK(enumerate_lines(2, 3).size() == 6);
  const auto zero = enumerate_lines(0, 4);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].parts == std::vector<int>(4, 0));
  for (int d = 1; d <= 4; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const auto lines = enumerate_lines(n, d);
      CHECK(lines.size() == line_count(n, d));
      CHECK(lines.size() == binomial(n + d - 1, d - 1));
      CHECK(std::is_sorted(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
        return x.parts > y.parts;
      }));
      std::set<std::vector<int>> seen;
      for (std::size_t i = 0; i < lines.size(); ++i) {
        CHECK(lines[i].weight() == n);
        CHECK(line_index(lines[i]) == i);
        seen.insert(lines[i].parts);
      }
      CHECK(seen.size() == lines.size());
    }
  }
}

TEST_CASE("squares") {
  const Line k{{1, 1}}, l{{1, 1}};
  const auto sq = enumerate_squares(k, l);
  CHECK(sq.size() == 2);
  CHECK(enumerate_squares(Line{{2, 0}}, Line{{0, 1}}).empty());
  for (int d = 2; d <= 3; ++d) {
    for (int n = 0; n <= 4; ++n) {
      const auto lines = enumerate_lines(n, d);
      for (const Line& a : lines) {
        for (const Line& b : lines) {
          const auto list = enumerate_squares(a, b);
          std::set<std::vector<int>> seen;
          for (const Square& m : list) {
            CHECK(m.row_sums() == a);
            CHECK(m.col_sums() == b);
            seen.insert(m.entries);
          }
          CHECK(seen.size() == list.size());
        }
      }
      // Every square of weight n appears for exactly one pair of margins.
      std::size_t total = 0;
      for (const Line& a : lines)
        for (const Line& b : lines) total += enumerate_squares(a, b).size();
      CHECK(total == binomial(n + d * d - 1, d * d - 1));
    }
  }
}

TEST_CASE("cubes") {
  for (int d = 2; d <= 3; ++d) {
    const int n_max = d == 2 ? 4 : 3;
    for (int n = 0; n <= n_max; ++n) {
      const auto lines = enumerate_lines(n, d);
      std::size_t total = 0;
      for (const Line& k : lines)
        for (const Line& l : lines)
          for (const Line& lt : lines)
            for (const Square& mb : enumerate_squares(k, l))
              for (const Square& mt : enumerate_squares(l, lt)) {
                const auto cubes = enumerate_cubes(mb, mt);
                std::set<std::vector<int>> seen;
                for (const Cube& p : cubes) {
                  CHECK(p.sum_j() == mb);
                  CHECK(p.sum_i_transposed() == mt);
                  seen.insert(p.entries);
                }
                CHECK(seen.size() == cubes.size());
                total += cubes.size();
              }
      // Each cube of weight n is reached from its own two margin squares.
      CHECK(total == binomial(n + d * d * d - 1, d * d * d - 1));
    }
  }
}

TEST_CASE("counting identities hold exhaustively") {
  for (int d = 2; d <= 3; ++d) {
    const int n_max = d == 2 ? 6 : 4;
    for (int n = 0; n <= n_max; ++n) {
      CHECK(identities::vandermonde_failures(n, d) == 0);
      CHECK(identities::row_multinomial_failures(n, d) == 0);
      CHECK(identities::cube_sqrt_worst(n, d) < 1e-12);
    }
  }
}
