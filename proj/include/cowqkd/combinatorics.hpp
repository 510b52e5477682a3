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

#ifndef COWQKD_COMBINATORICS_HPP
#define COWQKD_COMBINATORICS_HPP

// Compositions ("lines"), contingency tables with fixed margins ("squares")
// and three-way tables with two fixed face margins ("cubes").

#include <cstdint>
#include <span>
#include <vector>

namespace cowqkd {

/// n! / prod(parts!) when the parts sum to n, 0 otherwise.
/// Throws std::invalid_argument on negative input.
std::uint64_t multinomial(int n, std::span<const int> parts);

std::uint64_t binomial(int n, int k);

/// A composition of its weight into d non-negative parts.
struct Line {
  std::vector<int> parts;

  int dim() const { return static_cast<int>(parts.size()); }
  int weight() const;
  int operator[](int i) const { return parts[i]; }
  friend auto operator<=>(const Line&, const Line&) = default;
};

/// d x d non-negative integer table, row-major.
struct Square {
  int d = 0;
  std::vector<int> entries;

  Square() = default;
  explicit Square(int dim) : d(dim), entries(dim * dim, 0) {}

  int& operator()(int i, int j) { return entries[i * d + j]; }
  int operator()(int i, int j) const { return entries[i * d + j]; }
  int weight() const;
  Line row_sums() const;
  Line col_sums() const;
  /// Row i as a line.
  Line row(int i) const;
  Line col(int j) const;
  friend auto operator<=>(const Square&, const Square&) = default;
};

/// d x d x d non-negative integer table p(i, j, k).
struct Cube {
  int d = 0;
  std::vector<int> entries;

  Cube() = default;
  explicit Cube(int dim) : d(dim), entries(dim * dim * dim, 0) {}

  int& operator()(int i, int j, int k) { return entries[(i * d + j) * d + k]; }
  int operator()(int i, int j, int k) const {
    return entries[(i * d + j) * d + k];
  }
  int weight() const;
  /// (i, j) -> sum_k p(i, j, k)
  Square sum_k() const;
  /// (i, k) -> sum_j p(i, j, k)
  Square sum_j() const;
  /// (k, j) -> sum_i p(i, j, k); note the transposed layout.
  Square sum_i_transposed() const;
  friend auto operator<=>(const Cube&, const Cube&) = default;
};

std::size_t line_count(int n, int d);

/// All lines of weight n in dimension d, in reverse lexicographic order:
/// (n, 0, ..., 0) first, (0, ..., 0, n) last. For n = 1 the index of a line
/// equals the mode holding the photon.
std::vector<Line> enumerate_lines(int n, int d);

/// Index of `l` in enumerate_lines(l.weight(), l.dim()).
std::size_t line_index(const Line& l);

/// Squares with row sums k and column sums l. Empty when the weights differ.
std::vector<Square> enumerate_squares(const Line& k, const Line& l);

/// Cubes p with sum_j p(i, j, k) = m_bar(i, k) and
/// sum_i p(i, j, k) = m_tilde(k, j). Empty when the margins are
/// inconsistent.
std::vector<Cube> enumerate_cubes(const Square& m_bar, const Square& m_tilde);

}  // namespace cowqkd

#endif  // COWQKD_COMBINATORICS_HPP
